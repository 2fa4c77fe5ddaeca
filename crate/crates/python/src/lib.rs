//! Python bindings, importable as `insperc`.
//!
//! Invalid arguments raise `ValueError`, divergent quantities raise
//! `ArithmeticError`, failed threshold searches raise `RuntimeError`.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use insider_percolation::lattice::{self, LatticeGeometry, LatticeKind};
use insider_percolation::montecarlo::{self, SimulationConfig, SweepResult};
use insider_percolation::regime::{self, RegimeCutoffs, RegimeReport};
use insider_percolation::spacing::{self, BoundarySet, MinLatitude};
use insider_percolation::{analytic, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Divergence(_) => PyArithmeticError::new_err(e.to_string()),
        Error::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn min_latitude(l_min: f64) -> PyResult<MinLatitude> {
    MinLatitude::new(l_min).map_err(to_py)
}

fn geometry(name: &str, size: usize) -> PyResult<LatticeGeometry> {
    let kind: LatticeKind = name.parse().map_err(to_py)?;
    LatticeGeometry::new(kind, size).map_err(to_py)
}

/// Sorts the coordinates and returns the gaps between 0, the boundaries and 1.
#[pyfunction]
fn latitudes(boundaries: Vec<f64>) -> PyResult<Vec<f64>> {
    let b = BoundarySet::from_unsorted(boundaries).map_err(to_py)?;
    Ok(spacing::latitudes_from_boundaries(&b).into_vec())
}

#[pyfunction]
fn mean_latitude(boundaries: Vec<f64>) -> PyResult<f64> {
    let b = BoundarySet::from_unsorted(boundaries).map_err(to_py)?;
    Ok(spacing::mean_latitude(&spacing::latitudes_from_boundaries(
        &b,
    )))
}

/// Boundaries that survive removal of those closer than `l_min` to their
/// predecessor.
#[pyfunction]
fn eliminate_crossable_boundaries(boundaries: Vec<f64>, l_min: f64) -> PyResult<Vec<f64>> {
    let b = BoundarySet::from_unsorted(boundaries).map_err(to_py)?;
    Ok(spacing::eliminate_crossable_boundaries(&b, min_latitude(l_min)?).into_vec())
}

#[pyfunction]
fn threat_latitudes(boundaries: Vec<f64>, l_min: f64) -> PyResult<Vec<f64>> {
    let b = BoundarySet::from_unsorted(boundaries).map_err(to_py)?;
    Ok(spacing::threat_latitudes(&b, min_latitude(l_min)?).into_vec())
}

#[pyfunction]
fn occupation_probability(n: u64, l: f64) -> PyResult<f64> {
    Ok(analytic::occupation_probability(n, l)
        .map_err(to_py)?
        .value())
}

#[pyfunction]
fn threat_boundary_count_expected(n: u64, l_min: f64) -> PyResult<f64> {
    analytic::threat_boundary_count_expected(n, l_min).map_err(to_py)
}

#[pyfunction]
fn exact_threat_latitude(n: u64, l_min: f64) -> PyResult<f64> {
    analytic::exact_threat_latitude(n, l_min).map_err(to_py)
}

#[pyfunction]
fn n_min(l_min: f64) -> PyResult<f64> {
    Ok(analytic::n_min(min_latitude(l_min)?).value)
}

/// `(n_min, exact minimum, e * l_min)`.
#[pyfunction]
fn min_threat_latitude(l_min: f64) -> PyResult<(f64, f64, f64)> {
    let m = analytic::min_threat_latitude(min_latitude(l_min)?);
    Ok((m.n_min, m.exact, m.approximation))
}

#[pyfunction]
#[pyo3(signature = (p, pc = 1.0))]
fn mean_cluster_size_1d(p: f64, pc: f64) -> PyResult<f64> {
    let pc = analytic::PercolationThreshold::new(pc).map_err(to_py)?;
    analytic::mean_cluster_size_1d(p, pc).map_err(to_py)
}

#[pyfunction]
fn percolation_threat_latitude(n: u64, l_min: f64) -> PyResult<f64> {
    analytic::percolation_threat_latitude(n, l_min).map_err(to_py)
}

#[pyclass(name = "RegimeReport", frozen, get_all)]
struct PyRegimeReport {
    regime: String,
    n: u64,
    l_min: f64,
    n_min: f64,
    l_normal: f64,
    l_threat_exact: f64,
    ratio: f64,
    distance_to_tipping: f64,
}

impl From<RegimeReport> for PyRegimeReport {
    fn from(r: RegimeReport) -> Self {
        Self {
            regime: r.regime.label().to_string(),
            n: r.n,
            l_min: r.l_min,
            n_min: r.n_min_value,
            l_normal: r.l_normal,
            l_threat_exact: r.l_threat_exact,
            ratio: r.ratio,
            distance_to_tipping: r.distance_to_tipping,
        }
    }
}

#[pymethods]
impl PyRegimeReport {
    fn __repr__(&self) -> String {
        format!(
            "RegimeReport(regime='{}', n={}, l_min={}, ratio={:.4})",
            self.regime, self.n, self.l_min, self.ratio
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, l_min, possibly_optimal = 0.1, tipping_point = 0.8, over_regulated = 1.2))]
fn classify(
    n: u64,
    l_min: f64,
    possibly_optimal: f64,
    tipping_point: f64,
    over_regulated: f64,
) -> PyResult<PyRegimeReport> {
    let cutoffs = RegimeCutoffs {
        possibly_optimal,
        tipping_point,
        over_regulated,
    };
    Ok(regime::classify_with(n, l_min, &cutoffs)
        .map_err(to_py)?
        .into())
}

/// Result of a Monte Carlo sweep; columns are lists indexed by `N - 1`.
#[pyclass(name = "Sweep", frozen)]
struct PySweep(SweepResult);

#[pymethods]
impl PySweep {
    #[getter]
    fn n(&self) -> Vec<usize> {
        self.0.rows.iter().map(|r| r.n).collect()
    }

    #[getter]
    fn l_normal_sim(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.l_normal_sim).collect()
    }

    #[getter]
    fn l_threat_sim(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.l_threat_sim).collect()
    }

    #[getter]
    fn l_threat_exact(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.l_threat_exact).collect()
    }

    /// `None` where the percolation estimate diverges.
    #[getter]
    fn l_threat_percolation(&self) -> Vec<Option<f64>> {
        self.0.rows.iter().map(|r| r.l_threat_percolation).collect()
    }

    #[getter]
    fn ratio(&self) -> Vec<f64> {
        self.0.rows.iter().map(|r| r.ratio).collect()
    }

    #[pyo3(signature = (width = montecarlo::DEFAULT_SMOOTHING_WIDTH))]
    fn smoothed_threat_minimum(&self, width: usize) -> Option<usize> {
        self.0.smoothed_threat_minimum(width)
    }

    fn __len__(&self) -> usize {
        self.0.rows.len()
    }
}

#[pyfunction]
#[pyo3(signature = (n_trials = 100, n_max = 1000, l_min = 0.01, seed = 1, incremental = true))]
fn run_sweep(
    py: Python<'_>,
    n_trials: usize,
    n_max: usize,
    l_min: f64,
    seed: u64,
    incremental: bool,
) -> PyResult<PySweep> {
    let cfg = SimulationConfig::new(n_trials, n_max, l_min, seed)
        .map_err(to_py)?
        .with_incremental(incremental);
    let result = py.detach(|| montecarlo::run_sweep(&cfg)).map_err(to_py)?;
    Ok(PySweep(result))
}

/// Pooled sorted latitudes from `n_trials` draws of `n` boundaries, and
/// their Kolmogorov-Smirnov distance to `1 - exp(-(n + 1) x)`.
#[pyfunction]
#[pyo3(signature = (n, n_trials = 10_000, seed = 1))]
fn spacing_distribution(
    py: Python<'_>,
    n: usize,
    n_trials: usize,
    seed: u64,
) -> PyResult<(Vec<f64>, f64)> {
    let h = py
        .detach(|| montecarlo::spacing_distribution(n, n_trials, seed))
        .map_err(to_py)?;
    let ks = h.ks_to_exponential();
    Ok((h.samples, ks))
}

/// `(estimate, half_width, method)` for a geometry name such as `"square-2d"`.
#[pyfunction]
#[pyo3(signature = (geometry_name, size = 128, trials = 200, seed = 1))]
fn estimate_threshold(
    py: Python<'_>,
    geometry_name: &str,
    size: usize,
    trials: usize,
    seed: u64,
) -> PyResult<(f64, f64, String)> {
    let g = geometry(geometry_name, size)?;
    let e = py
        .detach(|| lattice::estimate_threshold(&g, trials, seed))
        .map_err(to_py)?;
    let method = match e.method {
        lattice::EstimateMethod::Analytic => "analytic",
        lattice::EstimateMethod::Bisection => "bisection",
    };
    Ok((e.estimate, e.half_width, method.to_string()))
}

#[pyfunction]
#[pyo3(signature = (geometry_name, size, p, trials = 100, seed = 1))]
fn empirical_mean_cluster_size(
    py: Python<'_>,
    geometry_name: &str,
    size: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> PyResult<f64> {
    let g = geometry(geometry_name, size)?;
    py.detach(|| lattice::empirical_mean_cluster_size(&g, p, trials, seed))
        .map_err(to_py)
}

/// Cluster sizes (descending) and the spanning flag for an explicit
/// occupancy pattern, one flag per site in row-major order.
#[pyfunction]
fn label_clusters(
    geometry_name: &str,
    size: usize,
    occupied: Vec<bool>,
) -> PyResult<(Vec<usize>, bool)> {
    let g = geometry(geometry_name, size)?;
    let l = lattice::build_lattice(&g).map_err(to_py)?;
    if occupied.len() != l.site_count() {
        return Err(PyValueError::new_err(format!(
            "expected {} occupancy flags, got {}",
            l.site_count(),
            occupied.len()
        )));
    }
    let stats =
        lattice::label_clusters(&l, &lattice::Occupancy::from_flags(occupied)).map_err(to_py)?;
    Ok((stats.sizes, stats.spanning))
}

/// `(geometry, z, p_c)` for every tabulated lattice.
#[pyfunction]
fn reference_thresholds() -> Vec<(String, u32, f64)> {
    lattice::reference_thresholds()
        .into_iter()
        .map(|r| (r.kind.to_string(), r.neighbors, r.pc))
        .collect()
}

#[pymodule]
fn insperc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(latitudes, m)?)?;
    m.add_function(wrap_pyfunction!(mean_latitude, m)?)?;
    m.add_function(wrap_pyfunction!(eliminate_crossable_boundaries, m)?)?;
    m.add_function(wrap_pyfunction!(threat_latitudes, m)?)?;
    m.add_function(wrap_pyfunction!(occupation_probability, m)?)?;
    m.add_function(wrap_pyfunction!(threat_boundary_count_expected, m)?)?;
    m.add_function(wrap_pyfunction!(exact_threat_latitude, m)?)?;
    m.add_function(wrap_pyfunction!(n_min, m)?)?;
    m.add_function(wrap_pyfunction!(min_threat_latitude, m)?)?;
    m.add_function(wrap_pyfunction!(mean_cluster_size_1d, m)?)?;
    m.add_function(wrap_pyfunction!(percolation_threat_latitude, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(spacing_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_mean_cluster_size, m)?)?;
    m.add_function(wrap_pyfunction!(label_clusters, m)?)?;
    m.add_function(wrap_pyfunction!(reference_thresholds, m)?)?;
    m.add_class::<PyRegimeReport>()?;
    m.add_class::<PySweep>()?;
    Ok(())
}
