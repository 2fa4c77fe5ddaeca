//! Reference implementations shared by the oracle and acceptance targets.
#![allow(dead_code)]

use std::collections::VecDeque;

use insider_percolation::lattice::{
    build_lattice, label_clusters, LatticeGeometry, LatticeKind, Occupancy,
};

/// Array-style transcription: sort, difference against the previous
/// coordinate (0 for the first), keep strictly wider gaps, dedupe.
pub fn reference_eliminate(x: &[f64], lmin: f64) -> Vec<f64> {
    let mut x = x.to_vec();
    x.sort_by(f64::total_cmp);
    let mut prev = vec![0.0];
    prev.extend_from_slice(&x[..x.len().saturating_sub(1)]);
    let mut kept: Vec<f64> = x
        .iter()
        .zip(&prev)
        .filter(|(a, b)| *a - *b > lmin)
        .map(|(a, _)| *a)
        .collect();
    kept.dedup();
    kept
}

pub fn reference_gaps(x: &[f64]) -> Vec<f64> {
    let mut pts = vec![0.0];
    pts.extend_from_slice(x);
    pts.push(1.0);
    pts.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Grid coordinates with the first axis varying fastest.
pub fn coords(site: usize, dim: usize, side: usize) -> Vec<i64> {
    let mut rem = site;
    (0..dim)
        .map(|_| {
            let c = (rem % side) as i64;
            rem /= side;
            c
        })
        .collect()
}

/// Adjacency written from the lattice definitions, not from the builder.
pub fn reference_adjacent(kind: LatticeKind, size: usize, a: usize, b: usize) -> bool {
    if a == b {
        return false;
    }
    match kind {
        LatticeKind::Linear1d => a.abs_diff(b) == 1,
        LatticeKind::Ring1d => a.abs_diff(b) == 1 || a.abs_diff(b) == size - 1,
        LatticeKind::Square2d | LatticeKind::Hypercubic(_) | LatticeKind::SimpleCubic3d => {
            let dim = kind.dimension().unwrap() as usize;
            let (ca, cb) = (coords(a, dim, size), coords(b, dim, size));
            ca.iter().zip(&cb).map(|(x, y)| (x - y).abs()).sum::<i64>() == 1
        }
        LatticeKind::Triangular2d => {
            let (ca, cb) = (coords(a, 2, size), coords(b, 2, size));
            let d = (cb[0] - ca[0], cb[1] - ca[1]);
            matches!(d, (1, 0) | (-1, 0) | (0, 1) | (0, -1) | (1, -1) | (-1, 1))
        }
        LatticeKind::Honeycomb2d => {
            let (ca, cb) = (coords(a, 2, size), coords(b, 2, size));
            let d = (cb[0] - ca[0], cb[1] - ca[1]);
            match d {
                (1, 0) | (-1, 0) => true,
                // Vertical bond iff the lower site has even coordinate sum.
                (0, 1) => (ca[0] + ca[1]) % 2 == 0,
                (0, -1) => (cb[0] + cb[1]) % 2 == 0,
                _ => false,
            }
        }
        LatticeKind::Bethe(3) => {
            // Generation-order numbering: 0; 1..=3; 4..=9 with parent 1 + (i - 4) / 2.
            let parent = |i: usize| match i {
                0 => None,
                1..=3 => Some(0),
                _ => Some(1 + (i - 4) / 2),
            };
            parent(a) == Some(b) || parent(b) == Some(a)
        }
        k => unreachable!("no oracle for {k}"),
    }
}

/// BFS cluster sizes (descending) and spanning along the last axis.
pub fn reference_clusters(
    kind: LatticeKind,
    size: usize,
    n: usize,
    occ: &[bool],
) -> (Vec<usize>, bool) {
    let dim = kind.dimension().unwrap_or(1) as usize;
    let spans_axis = !matches!(kind, LatticeKind::Ring1d | LatticeKind::Bethe(_));
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut spanning = false;
    for start in 0..n {
        if !occ[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let (mut count, mut low, mut high) = (0, false, false);
        while let Some(s) = queue.pop_front() {
            count += 1;
            if spans_axis {
                let last = coords(s, dim, size)[dim - 1];
                low |= last == 0;
                high |= last == size as i64 - 1;
            }
            for t in 0..n {
                if occ[t] && !seen[t] && reference_adjacent(kind, size, s, t) {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        sizes.push(count);
        spanning |= low && high;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    (sizes, spanning)
}

/// Every lattice small enough (at most 16 sites) to enumerate all patterns.
pub const SMALL_LATTICES: [(LatticeKind, usize); 7] = [
    (LatticeKind::Linear1d, 16),
    (LatticeKind::Ring1d, 16),
    (LatticeKind::Square2d, 4),
    (LatticeKind::Triangular2d, 4),
    (LatticeKind::Honeycomb2d, 4),
    (LatticeKind::Bethe(3), 2),
    (LatticeKind::Hypercubic(4), 2),
];

/// Compares adjacency and then labelling on all `2^n` occupancy patterns.
pub fn first_pattern_mismatch(kind: LatticeKind, size: usize) -> Option<String> {
    let lattice = build_lattice(&LatticeGeometry::new(kind, size).unwrap()).unwrap();
    let n = lattice.site_count();
    assert!(n <= 16, "{kind} has {n} sites");
    for a in 0..n {
        for b in 0..n {
            if lattice.neighbors(a).contains(&(b as u32)) != reference_adjacent(kind, size, a, b) {
                return Some(format!("{kind}: edge {a}-{b}"));
            }
        }
    }
    for mask in 0u32..(1 << n) {
        let occ: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let got = label_clusters(&lattice, &Occupancy::from_flags(occ.clone())).unwrap();
        let (sizes, spanning) = reference_clusters(kind, size, n, &occ);
        if got.sizes != sizes || got.spanning != spanning {
            return Some(format!(
                "{kind} mask {mask:#b}: got {:?}/{}, want {sizes:?}/{spanning}",
                got.sizes, got.spanning
            ));
        }
    }
    None
}
