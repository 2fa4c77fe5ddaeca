//! Geometry of the one-dimensional rule model.
//!
//! Rules are boundaries on the unit interval with hard walls at 0 and 1. The
//! gaps between neighbouring boundaries are the latitudes an individual has.
//! An insider threat treats every boundary whose gap to the previous boundary
//! is at most `L_min` as crossable and so effectively removed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(gaps) == 1` for externally supplied profiles.
pub const GAP_SUM_TOLERANCE: f64 = 1e-12;

/// Interior rule boundaries, strictly increasing inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BoundarySet {
    interior: Vec<f64>,
}

impl BoundarySet {
    pub fn new(interior: Vec<f64>) -> Result<Self> {
        validate_interior(&interior)?;
        Ok(Self { interior })
    }

    /// Sorts `coords` first. Duplicates are still rejected.
    pub fn from_unsorted(mut coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| x.is_nan()) {
            return Err(Error::validation("boundary coordinate is NaN"));
        }
        coords.sort_by(f64::total_cmp);
        Self::new(coords)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Number of rules `N`.
    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.interior
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.interior
    }
}

impl TryFrom<Vec<f64>> for BoundarySet {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BoundarySet> for Vec<f64> {
    fn from(b: BoundarySet) -> Self {
        b.interior
    }
}

fn validate_interior(xs: &[f64]) -> Result<()> {
    let mut prev = 0.0_f64;
    for (i, &x) in xs.iter().enumerate() {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::validation(format!(
                "boundary {i} = {x} is not strictly inside (0, 1)"
            )));
        }
        if i > 0 && x <= prev {
            return Err(Error::validation(format!(
                "boundaries not strictly increasing at index {i} ({prev} then {x})"
            )));
        }
        prev = x;
    }
    Ok(())
}

/// Ordered gap widths `L_1 .. L_{N+1}` between consecutive boundaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatitudeProfile {
    gaps: Vec<f64>,
}

impl LatitudeProfile {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::validation("latitude profile needs at least one gap"));
        }
        if let Some((i, g)) = gaps
            .iter()
            .enumerate()
            .find(|(_, g)| g.is_nan() || **g <= 0.0)
        {
            return Err(Error::validation(format!("gap {i} = {g} is not positive")));
        }
        let sum: f64 = gaps.iter().sum();
        if (sum - 1.0).abs() > GAP_SUM_TOLERANCE {
            return Err(Error::validation(format!("gaps sum to {sum}, expected 1")));
        }
        Ok(Self { gaps })
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean_latitude(self)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.gaps
    }
}

/// Minimum latitude `L_min` a normal individual needs; strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct MinLatitude(f64);

impl MinLatitude {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::validation(format!(
                "minimum latitude {value} must lie strictly inside (0, 1)"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for MinLatitude {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MinLatitude> for f64 {
    fn from(l: MinLatitude) -> Self {
        l.0
    }
}

pub fn latitudes_from_boundaries(b: &BoundarySet) -> LatitudeProfile {
    let xs = b.as_slice();
    let mut gaps = Vec::with_capacity(xs.len() + 1);
    let mut prev = 0.0;
    for &x in xs {
        gaps.push(x - prev);
        prev = x;
    }
    gaps.push(1.0 - prev);
    LatitudeProfile { gaps }
}

/// Arithmetic mean of the gaps. Always `1 / gap_count` up to rounding.
pub fn mean_latitude(p: &LatitudeProfile) -> f64 {
    p.gaps.iter().sum::<f64>() / p.gaps.len() as f64
}

/// Drops every boundary whose gap to the preceding boundary (or the wall at 0)
/// is `<= lmin`, in a single pass.
///
/// A boundary survives when it is the right end of a gap wider than `lmin`.
/// The final gap ending at the wall 1 never removes anything. A merged gap
/// always contains the next surviving gap, so applying this twice changes
/// nothing.
pub fn eliminate_crossable_boundaries(b: &BoundarySet, lmin: MinLatitude) -> BoundarySet {
    BoundarySet {
        interior: single_pass(b.as_slice(), lmin.get()),
    }
}

fn single_pass(xs: &[f64], lmin: f64) -> Vec<f64> {
    let mut kept = Vec::with_capacity(xs.len());
    let mut prev = 0.0;
    for &x in xs {
        if x - prev > lmin {
            kept.push(x);
        }
        prev = x;
    }
    kept
}

pub fn threat_latitudes(b: &BoundarySet, lmin: MinLatitude) -> LatitudeProfile {
    latitudes_from_boundaries(&eliminate_crossable_boundaries(b, lmin))
}

/// Mean normal latitude of an already validated, sorted slice, without allocating.
pub(crate) fn normal_mean_of_sorted(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut prev = 0.0;
    for &x in xs {
        sum += x - prev;
        prev = x;
    }
    sum += 1.0 - prev;
    sum / (xs.len() + 1) as f64
}

/// Mean threat latitude of an already validated, sorted slice, without allocating.
/// Same arithmetic as `threat_latitudes(..).mean()`.
pub(crate) fn threat_mean_of_sorted(xs: &[f64], lmin: f64) -> f64 {
    let mut sum = 0.0;
    let mut last_kept = 0.0;
    let mut prev = 0.0;
    let mut kept = 0usize;
    for &x in xs {
        if x - prev > lmin {
            sum += x - last_kept;
            last_kept = x;
            kept += 1;
        }
        prev = x;
    }
    sum += 1.0 - last_kept;
    sum / (kept + 1) as f64
}
