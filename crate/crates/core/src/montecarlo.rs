//! Trial-averaged simulation of the rule model.
//!
//! Each trial draws rule boundaries uniformly on `(0, 1)` and records, for
//! every rule count `N = 1..=n_rules_max`, the mean normal and mean threat
//! latitude. Results are averages of per-trial means.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, CompensatedSum};
use crate::spacing::{normal_mean_of_sorted, threat_mean_of_sorted, MinLatitude};

/// Boxcar width used to locate the minimum of the simulated threat curve.
pub const DEFAULT_SMOOTHING_WIDTH: usize = 10;

/// Trials simulated in parallel before their results are folded in.
const TRIAL_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_trials: usize,
    pub n_rules_max: usize,
    pub l_min: MinLatitude,
    pub master_seed: u64,
    /// Reuse one set of `n_rules_max` draws across all `N` within a trial.
    pub incremental: bool,
}

impl SimulationConfig {
    pub fn new(n_trials: usize, n_rules_max: usize, l_min: f64, master_seed: u64) -> Result<Self> {
        let cfg = Self {
            n_trials,
            n_rules_max,
            l_min: MinLatitude::new(l_min)?,
            master_seed,
            incremental: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_incremental(mut self, incremental: bool) -> Self {
        self.incremental = incremental;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::validation("n_trials must be at least 1"));
        }
        if self.n_rules_max == 0 {
            return Err(Error::validation("n_rules_max must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub l_normal_sim: f64,
    pub l_threat_sim: f64,
    pub l_threat_exact: f64,
    /// `None` where the percolation prediction has diverged.
    pub l_threat_percolation: Option<f64>,
    /// `l_threat_sim / l_normal_sim`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: SimulationConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, n: usize) -> Option<&SweepRow> {
        n.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    /// Centred boxcar average of the simulated threat curve, as `(N, value)`.
    ///
    /// Window `k` covers `N = k+1 ..= k+width` and is attributed to its
    /// (lower) middle `N = k + 1 + (width - 1) / 2`.
    pub fn smoothed_threat(&self, width: usize) -> Vec<(usize, f64)> {
        let width = width.max(1);
        if self.rows.len() < width {
            return Vec::new();
        }
        self.rows
            .windows(width)
            .map(|w| {
                let mean = w.iter().map(|r| r.l_threat_sim).sum::<f64>() / width as f64;
                (w[0].n + (width - 1) / 2, mean)
            })
            .collect()
    }

    /// `N` at the minimum of the smoothed threat curve.
    pub fn smoothed_threat_minimum(&self, width: usize) -> Option<usize> {
        self.smoothed_threat(width)
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(n, _)| n)
    }
}

/// Uniform draw on the open interval `(0, 1)`.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.random();
        if x > 0.0 {
            return x;
        }
    }
}

/// Inserts a fresh coordinate into `sorted`, redrawing on exact collisions.
fn insert_fresh(sorted: &mut Vec<f64>, rng: &mut ChaCha8Rng) {
    loop {
        let x = open_unit(rng);
        if let Err(pos) = sorted.binary_search_by(|y| y.total_cmp(&x)) {
            sorted.insert(pos, x);
            return;
        }
    }
}

/// `n` distinct sorted coordinates in `(0, 1)`.
pub(crate) fn draw_boundaries(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut xs = Vec::with_capacity(n);
    for _ in 0..n {
        insert_fresh(&mut xs, rng);
    }
    xs
}

struct TrialCurves {
    normal: Vec<f64>,
    threat: Vec<f64>,
}

fn run_trial(cfg: &SimulationConfig, trial: u64) -> TrialCurves {
    let mut rng = stream_rng(cfg.master_seed, trial);
    let lmin = cfg.l_min.get();
    let mut normal = Vec::with_capacity(cfg.n_rules_max);
    let mut threat = Vec::with_capacity(cfg.n_rules_max);
    if cfg.incremental {
        let mut xs = Vec::with_capacity(cfg.n_rules_max);
        for _ in 0..cfg.n_rules_max {
            insert_fresh(&mut xs, &mut rng);
            normal.push(normal_mean_of_sorted(&xs));
            threat.push(threat_mean_of_sorted(&xs, lmin));
        }
    } else {
        for n in 1..=cfg.n_rules_max {
            let xs = draw_boundaries(n, &mut rng);
            normal.push(normal_mean_of_sorted(&xs));
            threat.push(threat_mean_of_sorted(&xs, lmin));
        }
    }
    TrialCurves { normal, threat }
}

/// Runs the full sweep on the current rayon pool.
///
/// Output is bit-identical for a given config whatever the pool size: trial
/// `t` always uses stream `t` of the master seed, and per-trial curves are
/// folded in trial order.
pub fn run_sweep(cfg: &SimulationConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let n_max = cfg.n_rules_max;
    let mut normal = vec![CompensatedSum::default(); n_max];
    let mut threat = vec![CompensatedSum::default(); n_max];

    let trials: Vec<u64> = (0..cfg.n_trials as u64).collect();
    for chunk in trials.chunks(TRIAL_CHUNK) {
        let curves: Vec<TrialCurves> = chunk.par_iter().map(|&t| run_trial(cfg, t)).collect();
        for c in &curves {
            for i in 0..n_max {
                normal[i].add(c.normal[i]);
                threat[i].add(c.threat[i]);
            }
        }
    }

    let trials = cfg.n_trials as f64;
    let lmin = cfg.l_min.get();
    let rows = (0..n_max)
        .map(|i| {
            let n = i + 1;
            let l_normal_sim = normal[i].value() / trials;
            let l_threat_sim = threat[i].value() / trials;
            Ok(SweepRow {
                n,
                l_normal_sim,
                l_threat_sim,
                l_threat_exact: analytic::exact_threat_latitude(n as u64, lmin)?,
                l_threat_percolation: analytic::percolation_threat_latitude(n as u64, lmin).ok(),
                ratio: l_threat_sim / l_normal_sim,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult { config: *cfg, rows })
}

/// Latitudes pooled over many independent boundary sets of one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingHistogram {
    pub n: usize,
    pub n_trials: usize,
    pub seed: u64,
    /// Sorted ascending.
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub latitude: f64,
    pub empirical: f64,
    /// `P(N, L) = 1 - exp(-(N + 1) L)`.
    pub exponential: f64,
}

impl SpacingHistogram {
    /// Fraction of pooled latitudes `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// Kolmogorov–Smirnov distance `sup |F_emp - F|` to a continuous CDF.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let m = self.samples.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (((i + 1) as f64 / m) - f).max(f - (i as f64 / m))
            })
            .fold(0.0, f64::max)
    }

    /// KS distance to the exponential spacing law `1 - exp(-(N + 1) L)`.
    pub fn ks_to_exponential(&self) -> f64 {
        let rate = self.n as f64 + 1.0;
        self.ks_distance(|l| -(-rate * l).exp_m1())
    }

    /// `points` evenly spaced latitudes from 0 to the largest sample.
    pub fn cdf_grid(&self, points: usize) -> Vec<CdfPoint> {
        let top = self.samples.last().copied().unwrap_or(1.0);
        let points = points.max(2);
        let rate = self.n as f64 + 1.0;
        (0..points)
            .map(|k| {
                let latitude = top * k as f64 / (points - 1) as f64;
                CdfPoint {
                    latitude,
                    empirical: self.ecdf(latitude),
                    exponential: -(-rate * latitude).exp_m1(),
                }
            })
            .collect()
    }
}

/// Pools all `N + 1` latitudes from `n_trials` independent boundary sets of size `n`.
///
/// `n = 0` gives a point mass at 1.
pub fn spacing_distribution(n: usize, n_trials: usize, seed: u64) -> Result<SpacingHistogram> {
    if n_trials == 0 {
        return Err(Error::validation("n_trials must be at least 1"));
    }
    let per_trial: Vec<Vec<f64>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t);
            let xs = draw_boundaries(n, &mut rng);
            let mut prev = 0.0;
            let mut gaps: Vec<f64> = xs
                .iter()
                .map(|&x| {
                    let g = x - prev;
                    prev = x;
                    g
                })
                .collect();
            gaps.push(1.0 - prev);
            gaps
        })
        .collect();
    let mut samples: Vec<f64> = per_trial.into_iter().flatten().collect();
    samples.sort_by(f64::total_cmp);
    Ok(SpacingHistogram {
        n,
        n_trials,
        seed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize, n_max: usize, lmin: f64, seed: u64) -> SimulationConfig {
        SimulationConfig::new(trials, n_max, lmin, seed).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(0, 10, 0.01, 1).is_err());
        assert!(SimulationConfig::new(10, 0, 0.01, 1).is_err());
        assert!(SimulationConfig::new(10, 10, 0.0, 1).is_err());
        assert!(SimulationConfig::new(10, 10, 1.0, 1).is_err());
    }

    #[test]
    fn normal_curve_is_exact() {
        for incremental in [true, false] {
            let r = run_sweep(&cfg(20, 300, 0.01, 3).with_incremental(incremental)).unwrap();
            for row in &r.rows {
                assert!((row.l_normal_sim - 1.0 / (row.n as f64 + 1.0)).abs() < 1e-9);
                assert!(row.l_threat_sim >= row.l_normal_sim);
                assert!(row.ratio >= 1.0);
            }
        }
    }

    #[test]
    fn vanishing_lmin_gives_normal_curve() {
        let r = run_sweep(&cfg(10, 200, 1e-300, 11)).unwrap();
        for row in &r.rows {
            assert_eq!(row.l_threat_sim, row.l_normal_sim);
            assert!((row.l_threat_sim - 1.0 / (row.n as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn incremental_trial_reuses_draws() {
        // First N of the incremental draws must reproduce the single-N computation.
        let c = cfg(1, 50, 0.02, 5);
        let curves = run_trial(&c, 0);
        let mut rng = stream_rng(5, 0);
        let mut xs = Vec::new();
        for n in 1..=50 {
            insert_fresh(&mut xs, &mut rng);
            assert_eq!(xs.len(), n);
            assert_eq!(curves.threat[n - 1], threat_mean_of_sorted(&xs, 0.02));
        }
    }

    #[test]
    fn sweep_is_independent_of_thread_count() {
        let c = cfg(150, 120, 0.05, 42);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| run_sweep(&c)).unwrap();
        let b = four.install(|| run_sweep(&c)).unwrap();
        assert_eq!(a, b);
        let c2 = cfg(150, 120, 0.05, 43);
        assert_ne!(run_sweep(&c2).unwrap(), a);
    }

    #[test]
    fn smoothing_windows() {
        let r = run_sweep(&cfg(1, 30, 0.01, 1)).unwrap();
        let s = r.smoothed_threat(10);
        assert_eq!(s.len(), 21);
        assert_eq!(s[0].0, 5);
        assert_eq!(s.last().unwrap().0, 25);
        assert!(r.smoothed_threat(31).is_empty());
        assert_eq!(r.row(1).unwrap().n, 1);
        assert!(r.row(0).is_none());
    }

    #[test]
    fn spacing_point_mass_for_no_rules() {
        let h = spacing_distribution(0, 25, 9).unwrap();
        assert_eq!(h.samples, vec![1.0; 25]);
        assert_eq!(h.ecdf(0.999), 0.0);
        assert_eq!(h.ecdf(1.0), 1.0);
    }

    #[test]
    fn spacing_histogram_cdf_grid_is_monotone() {
        let h = spacing_distribution(10, 200, 2).unwrap();
        assert_eq!(h.samples.len(), 200 * 11);
        let g = h.cdf_grid(50);
        assert_eq!(g[0].empirical, 0.0);
        assert_eq!(g.last().unwrap().empirical, 1.0);
        assert!(g.windows(2).all(|w| w[1].empirical >= w[0].empirical));
        assert!(spacing_distribution(3, 0, 1).is_err());
    }

    #[test]
    fn ks_distance_of_exact_fit() {
        let h = SpacingHistogram {
            n: 0,
            n_trials: 4,
            seed: 0,
            samples: vec![0.125, 0.375, 0.625, 0.875],
        };
        // Uniform CDF: the ECDF steps straddle the diagonal by 1/8 everywhere.
        assert!((h.ks_distance(|x| x) - 0.125).abs() < 1e-15);
    }
}
