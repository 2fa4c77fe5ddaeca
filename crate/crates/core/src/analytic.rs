//! Closed-form results for the rule model and its 1D percolation mapping.
//!
//! Latitudes are spacings of `N` uniform points, whose distribution is taken
//! to be exponential: a gap is narrower than `L` with probability
//! `P(N, L) = 1 - exp(-(N + 1) L)`. A site (gap) narrower than `L_min` is
//! "occupied". Everything here follows from that single approximation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacing::MinLatitude;

/// `P(N, L)` together with its complement `exp(-(N + 1) L)`.
///
/// The complement is kept separately because `1 - P` loses all precision once
/// `(N + 1) L` exceeds about 37, long before the exponential underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupationProbability {
    value: f64,
    complement: f64,
}

impl OccupationProbability {
    pub fn value(self) -> f64 {
        self.value
    }

    /// `1 - P`, computed directly as `exp(-(N + 1) L)`.
    pub fn complement(self) -> f64 {
        self.complement
    }
}

/// Site percolation threshold `P_c` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PercolationThreshold(f64);

impl PercolationThreshold {
    /// Infinite 1D chain.
    pub const ONE_D: PercolationThreshold = PercolationThreshold(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::validation(format!(
                "percolation threshold {value} must lie in (0, 1]"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PercolationThreshold {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PercolationThreshold> for f64 {
    fn from(p: PercolationThreshold) -> Self {
        p.0
    }
}

fn check_length(name: &str, l: f64) -> Result<()> {
    if (0.0..=1.0).contains(&l) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {l} outside [0, 1]")))
    }
}

pub fn occupation_probability(n: u64, l: f64) -> Result<OccupationProbability> {
    check_length("latitude", l)?;
    let complement = (-((n as f64) + 1.0) * l).exp();
    Ok(OccupationProbability {
        value: -(-((n as f64) + 1.0) * l).exp_m1(),
        complement,
    })
}

/// Expected surviving boundary count `(1 - P(N, L_min)) N`, kept real-valued.
pub fn threat_boundary_count_expected(n: u64, lmin: f64) -> Result<f64> {
    let p = occupation_probability(n, lmin)?;
    Ok(p.complement() * n as f64)
}

/// Threat latitude `1 / (N exp(-(N + 1) L_min) + 1)`.
///
/// `lmin = 0` is accepted as the limit with no crossable boundaries, which
/// gives the normal latitude `1 / (N + 1)`.
pub fn exact_threat_latitude(n: u64, lmin: f64) -> Result<f64> {
    Ok(1.0 / (threat_boundary_count_expected(n, lmin)? + 1.0))
}

/// Rule count at which the threat latitude is smallest, `1 / L_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NMin {
    pub value: f64,
    pub rounded: u64,
}

pub fn n_min(lmin: MinLatitude) -> NMin {
    let value = 1.0 / lmin.get();
    NMin {
        value,
        rounded: value.round() as u64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimumThreatLatitude {
    pub n_min: f64,
    /// `1 / (N_min exp(-(L_min + 1)) + 1)`.
    pub exact: f64,
    /// Small-`L_min` form `e * L_min`.
    pub approximation: f64,
}

impl MinimumThreatLatitude {
    /// `|exact - approximation| / approximation`.
    pub fn relative_gap(&self) -> f64 {
        (self.exact - self.approximation).abs() / self.approximation
    }
}

pub fn min_threat_latitude(lmin: MinLatitude) -> MinimumThreatLatitude {
    let l = lmin.get();
    let n = 1.0 / l;
    MinimumThreatLatitude {
        n_min: n,
        exact: 1.0 / (n * (-(l + 1.0)).exp() + 1.0),
        approximation: std::f64::consts::E * l,
    }
}

/// Size-weighted mean cluster size `S(P) = (P_c + P) / (P_c - P)` of infinite
/// 1D site percolation. Diverges at and above the threshold.
pub fn mean_cluster_size_1d(p: f64, pc: PercolationThreshold) -> Result<f64> {
    if p.is_nan() || p < 0.0 {
        return Err(Error::domain(format!(
            "occupation probability {p} is negative"
        )));
    }
    let pc = pc.get();
    if p >= pc {
        return Err(Error::Divergence(format!(
            "mean cluster size diverges for P = {p} >= P_c = {pc}"
        )));
    }
    Ok((pc + p) / (pc - p))
}

/// Threat latitude predicted by infinite 1D percolation, `S(P(N, L_min)) / (N + 1)`.
pub fn percolation_threat_latitude(n: u64, lmin: f64) -> Result<f64> {
    let p = occupation_probability(n, lmin)?;
    let q = p.complement();
    if q == 0.0 {
        return Err(Error::Divergence(format!(
            "occupation probability saturates at 1 for N = {n}, L_min = {lmin}"
        )));
    }
    // S = (1 + P) / (1 - P) with P_c = 1, written in terms of q = 1 - P.
    Ok((2.0 - q) / q / (n as f64 + 1.0))
}
