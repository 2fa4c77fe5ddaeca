use serde::Serialize;

use super::geometry::{LatticeGeometry, LatticeKind};
use crate::error::{Error, Result};

/// Neighbour lists in compressed sparse row form, plus the two opposite faces
/// used for spanning tests.
///
/// Regular lattices use open boundaries (except `Ring1d`) and sites are
/// indexed with the first coordinate varying fastest. Spanning runs along the
/// last axis.
#[derive(Debug, Clone, Serialize)]
pub struct Lattice {
    geometry: LatticeGeometry,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    faces: Option<(Vec<u32>, Vec<u32>)>,
}

impl Lattice {
    pub fn geometry(&self) -> LatticeGeometry {
        self.geometry
    }

    pub fn site_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, site: usize) -> &[u32] {
        &self.neighbors[self.offsets[site]..self.offsets[site + 1]]
    }

    pub fn degree(&self, site: usize) -> usize {
        self.offsets[site + 1] - self.offsets[site]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Low and high faces, if the lattice has any.
    pub fn faces(&self) -> Option<(&[u32], &[u32])> {
        self.faces
            .as_ref()
            .map(|(lo, hi)| (lo.as_slice(), hi.as_slice()))
    }

    fn from_lists(
        geometry: LatticeGeometry,
        lists: Vec<Vec<u32>>,
        faces: Option<(Vec<u32>, Vec<u32>)>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for l in lists {
            neighbors.extend_from_slice(&l);
            offsets.push(neighbors.len());
        }
        Self {
            geometry,
            offsets,
            neighbors,
            faces,
        }
    }
}

pub fn build_lattice(g: &LatticeGeometry) -> Result<Lattice> {
    let g = LatticeGeometry::new(g.kind, g.size)?;
    let side = g.size;
    match g.kind {
        LatticeKind::Linear1d => Ok(grid(g, 1, side, false, &[axis_stencil(1)])),
        LatticeKind::Ring1d => Ok(grid(g, 1, side, true, &[axis_stencil(1)])),
        LatticeKind::Square2d => Ok(grid(g, 2, side, false, &[axis_stencil(2)])),
        LatticeKind::SimpleCubic3d => Ok(grid(g, 3, side, false, &[axis_stencil(3)])),
        LatticeKind::Hypercubic(d) => Ok(grid(
            g,
            d as usize,
            side,
            false,
            &[axis_stencil(d as usize)],
        )),
        LatticeKind::Triangular2d => {
            let mut s = axis_stencil(2);
            s.push(vec![1, -1]);
            s.push(vec![-1, 1]);
            Ok(grid(g, 2, side, false, &[s]))
        }
        LatticeKind::Honeycomb2d => {
            // Brick-wall form: horizontal bonds everywhere, one vertical bond
            // per site alternating up/down with the parity of x + y.
            let up = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
            let down = vec![vec![1, 0], vec![-1, 0], vec![0, -1]];
            Ok(grid(g, 2, side, false, &[up, down]))
        }
        LatticeKind::Bethe(z) => Ok(bethe(g, z as usize)),
        k => Err(Error::UnsupportedGeometry(format!(
            "{k} is listed in the reference table but cannot be built"
        ))),
    }
}

fn axis_stencil(dim: usize) -> Vec<Vec<i64>> {
    let mut s = Vec::with_capacity(2 * dim);
    for axis in 0..dim {
        for step in [1, -1] {
            let mut v = vec![0; dim];
            v[axis] = step;
            s.push(v);
        }
    }
    s
}

/// Builds a `side^dim` grid. With two stencils, sites whose coordinate sum is
/// odd use the second one.
fn grid(
    g: LatticeGeometry,
    dim: usize,
    side: usize,
    periodic: bool,
    stencils: &[Vec<Vec<i64>>],
) -> Lattice {
    let n = side.pow(dim as u32);
    let side_i = side as i64;
    let mut lists = Vec::with_capacity(n);
    let mut coords = vec![0i64; dim];
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for site in 0..n {
        let mut rem = site;
        for c in coords.iter_mut() {
            *c = (rem % side) as i64;
            rem /= side;
        }
        let parity = (coords.iter().sum::<i64>() % 2) as usize;
        let stencil = &stencils[parity.min(stencils.len() - 1)];
        let mut list = Vec::with_capacity(stencil.len());
        'offsets: for offset in stencil {
            let mut index = 0i64;
            let mut stride = 1i64;
            for (c, o) in coords.iter().zip(offset) {
                let mut x = c + o;
                if periodic {
                    x = x.rem_euclid(side_i);
                } else if x < 0 || x >= side_i {
                    continue 'offsets;
                }
                index += x * stride;
                stride *= side_i;
            }
            list.push(index as u32);
        }
        lists.push(list);
        if !periodic {
            let last = coords[dim - 1];
            if last == 0 {
                lo.push(site as u32);
            }
            if last == side_i - 1 {
                hi.push(site as u32);
            }
        }
    }
    let faces = (!periodic).then_some((lo, hi));
    Lattice::from_lists(g, lists, faces)
}

/// Cayley tree: the root has `z` children, every later non-leaf `z - 1`.
fn bethe(g: LatticeGeometry, z: usize) -> Lattice {
    let n = g.site_count().expect("validated in LatticeGeometry::new");
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;
    for _ in 0..g.size {
        let mut next = Vec::new();
        for &parent in &frontier {
            let children = if parent == 0 { z } else { z - 1 };
            for _ in 0..children {
                let child = next_id;
                next_id += 1;
                lists[parent].push(child as u32);
                lists[child].push(parent as u32);
                next.push(child);
            }
        }
        frontier = next;
    }
    debug_assert_eq!(next_id, n);
    Lattice::from_lists(g, lists, None)
}
