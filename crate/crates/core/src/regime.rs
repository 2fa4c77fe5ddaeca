//! Classification of an environment by its rule count relative to `N_min`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::spacing::MinLatitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    UnderRegulated,
    /// Speculative band between under-regulation and the tipping point; no
    /// optimality is claimed.
    PossiblyOptimal,
    TippingPoint,
    OverRegulated,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::UnderRegulated => "under-regulated",
            Regime::PossiblyOptimal => "possibly-optimal",
            Regime::TippingPoint => "tipping-point",
            Regime::OverRegulated => "over-regulated",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Boundaries on `r = N / N_min` between consecutive regimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCutoffs {
    /// `r` below this is under-regulated.
    pub possibly_optimal: f64,
    /// `r` from this up to `over_regulated` (inclusive) is the tipping point.
    pub tipping_point: f64,
    /// `r` above this is over-regulated.
    pub over_regulated: f64,
}

impl Default for RegimeCutoffs {
    fn default() -> Self {
        Self {
            possibly_optimal: 0.1,
            tipping_point: 0.8,
            over_regulated: 1.2,
        }
    }
}

impl RegimeCutoffs {
    pub fn validate(&self) -> Result<()> {
        let ok = self.possibly_optimal > 0.0
            && self.possibly_optimal <= self.tipping_point
            && self.tipping_point <= 1.0
            && self.over_regulated >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "regime cutoffs must satisfy 0 < {} <= {} <= 1 <= {}",
                self.possibly_optimal, self.tipping_point, self.over_regulated
            )))
        }
    }

    pub fn regime_for(&self, r: f64) -> Regime {
        if r < self.possibly_optimal {
            Regime::UnderRegulated
        } else if r < self.tipping_point {
            Regime::PossiblyOptimal
        } else if r <= self.over_regulated {
            Regime::TippingPoint
        } else {
            Regime::OverRegulated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub n: u64,
    pub l_min: f64,
    pub n_min_value: f64,
    /// `1 / (N + 1)`.
    pub l_normal: f64,
    pub l_threat_exact: f64,
    /// `l_threat_exact / l_normal`, at least 1.
    pub ratio: f64,
    /// `N / N_min`.
    pub distance_to_tipping: f64,
}

pub fn classify(n: u64, lmin: f64) -> Result<RegimeReport> {
    classify_with(n, lmin, &RegimeCutoffs::default())
}

pub fn classify_with(n: u64, lmin: f64, cutoffs: &RegimeCutoffs) -> Result<RegimeReport> {
    cutoffs.validate()?;
    let l = MinLatitude::new(lmin).map_err(|e| Error::Domain(e.to_string()))?;
    let n_min = analytic::n_min(l).value;
    let r = n as f64 / n_min;
    let l_normal = 1.0 / (n as f64 + 1.0);
    let l_threat_exact = analytic::exact_threat_latitude(n, lmin)?;
    Ok(RegimeReport {
        regime: cutoffs.regime_for(r),
        n,
        l_min: lmin,
        n_min_value: n_min,
        l_normal,
        l_threat_exact,
        ratio: l_threat_exact / l_normal,
        distance_to_tipping: r,
    })
}
