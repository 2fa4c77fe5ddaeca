use rand::Rng;
use serde::Serialize;

use super::build::Lattice;
use super::union_find::DisjointSet;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Per-site occupation flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Occupancy {
    pub occupied: Vec<bool>,
    /// Occupation probability and seed, when randomly generated.
    pub probability: Option<f64>,
    pub seed: Option<u64>,
}

impl Occupancy {
    pub fn from_flags(occupied: Vec<bool>) -> Self {
        Self {
            occupied,
            probability: None,
            seed: None,
        }
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub fn fraction(&self) -> f64 {
        self.occupied_count() as f64 / self.occupied.len() as f64
    }
}

/// One uniform on `[0, 1)` per site from stream `stream` of `seed`.
///
/// A site is occupied at probability `p` iff its uniform is `< p`, so the same
/// stream couples realisations across all `p`.
pub fn site_uniforms(n_sites: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, stream);
    (0..n_sites).map(|_| rng.random::<f64>()).collect()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "occupation probability {p} outside [0, 1]"
        )))
    }
}

pub fn occupy(lattice: &Lattice, p: f64, seed: u64) -> Result<Occupancy> {
    occupy_stream(lattice, p, seed, 0)
}

/// As [`occupy`], drawing from stream `stream`; trial `t` of the estimators uses stream `t`.
pub fn occupy_stream(lattice: &Lattice, p: f64, seed: u64, stream: u64) -> Result<Occupancy> {
    check_probability(p)?;
    let occupied = site_uniforms(lattice.site_count(), seed, stream)
        .into_iter()
        .map(|u| u < p)
        .collect();
    Ok(Occupancy {
        occupied,
        probability: Some(p),
        seed: Some(seed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterStats {
    /// Sizes of occupied clusters, largest first.
    pub sizes: Vec<usize>,
    pub occupied: usize,
    /// Some cluster touches both spanning faces.
    pub spanning: bool,
}

impl ClusterStats {
    /// Size-weighted mean `sum(s^2) / sum(s)`: the expected size of the cluster
    /// containing a uniformly chosen occupied site. `None` with no occupied sites.
    pub fn mean_cluster_size(&self) -> Option<f64> {
        if self.occupied == 0 {
            return None;
        }
        let sq: u128 = self.sizes.iter().map(|&s| (s as u128) * (s as u128)).sum();
        Some(sq as f64 / self.occupied as f64)
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }
}

pub fn label_clusters(lattice: &Lattice, occ: &Occupancy) -> Result<ClusterStats> {
    let n = lattice.site_count();
    if occ.occupied.len() != n {
        return Err(Error::validation(format!(
            "occupancy has {} sites, lattice has {n}",
            occ.occupied.len()
        )));
    }
    let flags = &occ.occupied;
    let mut ds = DisjointSet::new(n);
    for i in (0..n).filter(|&i| flags[i]) {
        for &j in lattice.neighbors(i) {
            let j = j as usize;
            if j > i && flags[j] {
                ds.union(i, j);
            }
        }
    }

    let mut sizes = Vec::new();
    let mut occupied = 0;
    for i in (0..n).filter(|&i| flags[i]) {
        occupied += 1;
        if ds.find(i) == i {
            sizes.push(ds.set_size(i));
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));

    let spanning = match lattice.faces() {
        Some((lo, hi)) => {
            let mut touches_low = vec![false; n];
            for &s in lo.iter().filter(|&&s| flags[s as usize]) {
                let r = ds.find(s as usize);
                touches_low[r] = true;
            }
            hi.iter()
                .filter(|&&s| flags[s as usize])
                .any(|&s| touches_low[ds.find(s as usize)])
        }
        None => false,
    };

    Ok(ClusterStats {
        sizes,
        occupied,
        spanning,
    })
}
