//! Trial-averaged estimators on top of cluster labelling.
//!
//! Trial `t` always draws its site uniforms from stream `t` of the seed, so
//! every estimator here is deterministic and independent of thread count.

use rayon::prelude::*;
use serde::Serialize;

use super::build::{build_lattice, Lattice};
use super::clusters::{label_clusters, occupy_stream, site_uniforms};
use super::geometry::{LatticeGeometry, LatticeKind};
use super::union_find::DisjointSet;
use crate::error::{Error, Result};

/// Trial average of the size-weighted mean cluster size.
///
/// Trials without any occupied site are skipped; if every trial is empty the
/// result is the isolated-site limit 1.
pub fn empirical_mean_cluster_size(
    g: &LatticeGeometry,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let lattice = build_lattice(g)?;
    mean_cluster_size_on(&lattice, p, trials, seed)
}

pub fn mean_cluster_size_on(lattice: &Lattice, p: f64, trials: usize, seed: u64) -> Result<f64> {
    check_trials(trials)?;
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let occ = occupy_stream(lattice, p, seed, t)?;
            Ok(label_clusters(lattice, &occ)?.mean_cluster_size())
        })
        .collect::<Result<Vec<Option<f64>>>>()?;
    let valid: Vec<f64> = per_trial.into_iter().flatten().collect();
    if valid.is_empty() {
        Ok(1.0)
    } else {
        Ok(valid.iter().sum::<f64>() / valid.len() as f64)
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(Error::validation("trials must be at least 1"))
    } else {
        Ok(())
    }
}

fn require_faces(lattice: &Lattice) -> Result<()> {
    if lattice.faces().is_none() {
        return Err(Error::UnsupportedGeometry(format!(
            "{} has no opposite faces to span",
            lattice.geometry().kind
        )));
    }
    Ok(())
}

/// Fraction of trials with a cluster connecting the two opposite faces.
pub fn spanning_probability(g: &LatticeGeometry, p: f64, trials: usize, seed: u64) -> Result<f64> {
    if !g.kind.has_faces() {
        return Err(Error::UnsupportedGeometry(format!(
            "{} has no opposite faces to span",
            g.kind
        )));
    }
    let lattice = build_lattice(g)?;
    spanning_probability_on(&lattice, p, trials, seed)
}

pub fn spanning_probability_on(lattice: &Lattice, p: f64, trials: usize, seed: u64) -> Result<f64> {
    require_faces(lattice)?;
    check_trials(trials)?;
    let spans = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let occ = occupy_stream(lattice, p, seed, t)?;
            Ok(label_clusters(lattice, &occ)?.spanning)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(spans.iter().filter(|&&s| s).count() as f64 / trials as f64)
}

/// For each trial, the occupation probability at which a spanning cluster
/// first appears: the site uniform whose addition completes the crossing,
/// found by adding sites in increasing uniform order. A trial spans at `p`
/// exactly when `p` exceeds this value. Infinite if the full lattice does not span.
pub fn critical_occupations(lattice: &Lattice, trials: usize, seed: u64) -> Result<Vec<f64>> {
    require_faces(lattice)?;
    check_trials(trials)?;
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|t| first_spanning_uniform(lattice, seed, t))
        .collect())
}

fn first_spanning_uniform(lattice: &Lattice, seed: u64, stream: u64) -> f64 {
    let n = lattice.site_count();
    let (lo, hi) = lattice.faces().expect("checked by caller");
    let u = site_uniforms(n, seed, stream);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| u[a as usize].total_cmp(&u[b as usize]).then(a.cmp(&b)));

    const LOW: u8 = 1;
    const HIGH: u8 = 2;
    let mut face = vec![0u8; n];
    for &s in lo {
        face[s as usize] |= LOW;
    }
    for &s in hi {
        face[s as usize] |= HIGH;
    }

    let mut ds = DisjointSet::new(n);
    let mut occupied = vec![false; n];
    // face flags live on roots
    let mut touches = face.clone();
    for &site in &order {
        let i = site as usize;
        occupied[i] = true;
        let mut flags = touches[i];
        let mut root = i;
        for &j in lattice.neighbors(i) {
            let j = j as usize;
            if occupied[j] {
                flags |= touches[ds.find(j)];
                root = ds.union(root, j);
            }
        }
        touches[root] = flags;
        if flags == LOW | HIGH {
            return u[i];
        }
    }
    f64::INFINITY
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BisectionOptions {
    /// Stop when the bracket is narrower than this.
    pub tolerance: f64,
    pub max_depth: usize,
    /// Spanning fraction that defines the threshold.
    pub target: f64,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-4,
            max_depth: 40,
            target: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Analytic,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub estimate: f64,
    /// Half the final bracket plus half the spread of per-trial critical
    /// occupations between the `0.5 -/+ 1 sigma` binomial quantiles.
    pub half_width: f64,
    pub method: EstimateMethod,
    pub bisection_steps: usize,
}

pub fn estimate_threshold(
    g: &LatticeGeometry,
    trials: usize,
    seed: u64,
) -> Result<ThresholdEstimate> {
    estimate_threshold_with(g, trials, seed, BisectionOptions::default())
}

/// Bisects the coupled spanning probability for the point where it reaches
/// `opts.target`. The Bethe lattice returns its exact `1 / (z - 1)`.
pub fn estimate_threshold_with(
    g: &LatticeGeometry,
    trials: usize,
    seed: u64,
    opts: BisectionOptions,
) -> Result<ThresholdEstimate> {
    if let LatticeKind::Bethe(z) = g.kind {
        return Ok(ThresholdEstimate {
            estimate: 1.0 / (z as f64 - 1.0),
            half_width: 0.0,
            method: EstimateMethod::Analytic,
            bisection_steps: 0,
        });
    }
    if !g.kind.has_faces() {
        return Err(Error::UnsupportedGeometry(format!(
            "{} has no opposite faces to span",
            g.kind
        )));
    }
    check_trials(trials)?;
    let lattice = build_lattice(g)?;

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if spanning_probability_on(&lattice, hi, trials, seed)? < opts.target {
        return Err(Error::NonConvergence { depth: 0, lo, hi });
    }
    let mut steps = 0;
    while hi - lo > opts.tolerance {
        if steps == opts.max_depth {
            return Err(Error::NonConvergence {
                depth: steps,
                lo,
                hi,
            });
        }
        let mid = 0.5 * (lo + hi);
        if spanning_probability_on(&lattice, mid, trials, seed)? >= opts.target {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }

    let mut critical = critical_occupations(&lattice, trials, seed)?;
    critical.sort_by(f64::total_cmp);
    let sigma = 0.5 / (trials as f64).sqrt();
    let spread =
        quantile(&critical, opts.target + sigma) - quantile(&critical, opts.target - sigma);

    Ok(ThresholdEstimate {
        estimate: 0.5 * (lo + hi),
        half_width: 0.5 * (hi - lo) + 0.5 * spread.min(1.0),
        method: EstimateMethod::Bisection,
        bisection_steps: steps,
    })
}

/// Lower empirical quantile of sorted data, clamped to `[0, 1]` in probability.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let q = q.clamp(0.0, 1.0);
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx].min(1.0)
}

/// One row of a threshold validation report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub geometry: LatticeKind,
    pub z: u32,
    pub reference_pc: f64,
    pub estimated_pc: f64,
    pub half_width: f64,
    pub method: EstimateMethod,
    pub lattice_size: usize,
    pub sites: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ThresholdReport {
    pub fn deviation(&self) -> f64 {
        (self.estimated_pc - self.reference_pc).abs()
    }
}

pub fn threshold_report(g: &LatticeGeometry, trials: usize, seed: u64) -> Result<ThresholdReport> {
    let est = estimate_threshold(g, trials, seed)?;
    Ok(ThresholdReport {
        geometry: g.kind,
        z: g.coordination(),
        reference_pc: g.kind.reference_threshold(),
        estimated_pc: est.estimate,
        half_width: est.half_width,
        method: est.method,
        lattice_size: g.size,
        sites: g.site_count()?,
        trials,
        seed,
    })
}
