//! Library results against independent reference implementations.

mod common;

use common::{first_pattern_mismatch, reference_eliminate, reference_gaps, SMALL_LATTICES};
use insider_percolation::analytic::{self, PercolationThreshold};
use insider_percolation::lattice::{
    build_lattice, label_clusters, LatticeGeometry, LatticeKind, Occupancy,
};
use insider_percolation::montecarlo::{run_sweep, SimulationConfig};
use insider_percolation::spacing::{
    eliminate_crossable_boundaries, threat_latitudes, BoundarySet, MinLatitude,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn elimination_matches_reference_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let n = rng.random_range(0..200);
        let lmin = 10f64.powf(rng.random_range(-4.0..-0.3));
        let mut x: Vec<f64> = (0..n)
            .map(|_| rng.random::<f64>())
            .filter(|&v| v > 0.0)
            .collect();
        x.sort_by(f64::total_cmp);
        x.dedup();
        let b = BoundarySet::new(x.clone()).unwrap();
        let l = MinLatitude::new(lmin).unwrap();
        let want = reference_eliminate(&x, lmin);
        let got = eliminate_crossable_boundaries(&b, l);
        assert_eq!(got.as_slice(), &want[..], "case {case}, lmin {lmin}");
        let gaps = threat_latitudes(&b, l);
        assert_eq!(gaps.gaps(), &reference_gaps(&want)[..], "case {case}");
    }
}

#[test]
fn cluster_labelling_matches_bfs_on_every_pattern() {
    for (kind, size) in SMALL_LATTICES {
        if let Some(msg) = first_pattern_mismatch(kind, size) {
            panic!("{msg}");
        }
    }
}

/// `E[sum s^2] / E[sum s]` on a ring by summing over all `2^L` patterns.
fn ring_mean_cluster_size(len: usize, p: f64) -> f64 {
    let lattice = build_lattice(&LatticeGeometry::new(LatticeKind::Ring1d, len).unwrap()).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for mask in 0u32..(1 << len) {
        let k = mask.count_ones() as i32;
        let weight = p.powi(k) * (1.0 - p).powi(len as i32 - k);
        let occ: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
        let stats = label_clusters(&lattice, &Occupancy::from_flags(occ)).unwrap();
        num += weight * stats.sizes.iter().map(|&s| (s * s) as f64).sum::<f64>();
        den += weight * stats.occupied as f64;
    }
    num / den
}

#[test]
fn ring_enumeration_reproduces_one_dimensional_cluster_size() {
    let p = 0.5;
    let enumerated = ring_mean_cluster_size(20, p);
    let closed = analytic::mean_cluster_size_1d(p, PercolationThreshold::ONE_D).unwrap();
    assert!((closed - 3.0).abs() < 1e-12);
    // Finite-ring corrections are of order p^L.
    assert!(
        (enumerated - closed).abs() < 1e-3,
        "{enumerated} vs {closed}"
    );
}

/// Straight-line Monte Carlo of the threat latitude at one `N`, with its own
/// random stream and uniqueness handling.
fn reference_threat_mean(n: usize, lmin: f64, trials: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..trials {
        let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let kept = reference_eliminate(&x, lmin);
        let v = 1.0 / (kept.len() as f64 + 1.0);
        sum += v;
        sq += v * v;
    }
    let mean = sum / trials as f64;
    let var = sq / trials as f64 - mean * mean;
    (mean, (var / trials as f64).sqrt())
}

#[test]
fn sweep_agrees_with_reference_simulation() {
    let (trials, lmin) = (4000, 0.05);
    for incremental in [true, false] {
        let cfg = SimulationConfig::new(trials, 40, lmin, 11)
            .unwrap()
            .with_incremental(incremental);
        let sweep = run_sweep(&cfg).unwrap();
        for n in [1usize, 5, 10, 20, 40] {
            let row = sweep.row(n).unwrap();
            let (mean, se) = reference_threat_mean(n, lmin, trials, 500 + n as u64);
            let tol = 5.0 * (2.0f64).sqrt() * se + 1e-12;
            assert!(
                (row.l_threat_sim - mean).abs() < tol,
                "incremental {incremental}, N = {n}: {} vs {mean} (tol {tol})",
                row.l_threat_sim
            );
            assert!((row.l_normal_sim - 1.0 / (n as f64 + 1.0)).abs() < 1e-12);
        }
    }
}
