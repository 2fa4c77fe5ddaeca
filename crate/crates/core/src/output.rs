//! CSV, JSON and plain-text renderings of results.
//!
//! CSV files start with the effective configuration as `# `-prefixed TOML
//! lines; JSON documents carry it under `"config"`. Floats use Rust's
//! shortest round-trip formatting, so output is byte-stable for a given input.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::analytic;
use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::lattice::ThresholdReport;
use crate::montecarlo::{SpacingHistogram, SweepResult};
use crate::regime::{classify_with, Regime, RegimeCutoffs, RegimeReport};
use crate::spacing::MinLatitude;

pub const SWEEP_COLUMNS: [&str; 6] = [
    "N",
    "l_normal_sim",
    "l_threat_sim",
    "l_threat_exact",
    "l_threat_percolation",
    "ratio",
];

pub const THRESHOLD_COLUMNS: [&str; 10] = [
    "geometry",
    "z",
    "reference_pc",
    "estimated_pc",
    "half_width",
    "method",
    "lattice_size",
    "sites",
    "trials",
    "seed",
];

pub const SPACING_COLUMNS: [&str; 3] = ["latitude", "empirical_cdf", "exponential_cdf"];

/// Closed-form summary for one `(N, L_min)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub n: u64,
    pub l_min: f64,
    pub occupation_probability: f64,
    pub n_threat_expected: f64,
    pub l_exact: f64,
    pub l_percolation: f64,
    pub n_min: f64,
    pub min_threat_latitude: f64,
    pub e_l_min: f64,
    pub regime: Regime,
}

pub fn exact_report(n: u64, l_min: f64, cutoffs: &RegimeCutoffs) -> Result<ExactReport> {
    let lmin = MinLatitude::new(l_min).map_err(|e| Error::Domain(e.to_string()))?;
    let min = analytic::min_threat_latitude(lmin);
    Ok(ExactReport {
        n,
        l_min,
        occupation_probability: analytic::occupation_probability(n, l_min)?.value(),
        n_threat_expected: analytic::threat_boundary_count_expected(n, l_min)?,
        l_exact: analytic::exact_threat_latitude(n, l_min)?,
        l_percolation: analytic::percolation_threat_latitude(n, l_min)?,
        n_min: min.n_min,
        min_threat_latitude: min.exact,
        e_l_min: min.approximation,
        regime: classify_with(n, l_min, cutoffs)?.regime,
    })
}

fn csv_header(echo: &RunConfig, command: &str) -> Result<String> {
    let mut s = format!("# command = \"{command}\"\n");
    for line in echo.to_toml_string()?.lines() {
        writeln!(s, "# {line}").unwrap();
    }
    Ok(s)
}

fn json_doc(command: &str, echo: &RunConfig, body: serde_json::Value) -> Result<String> {
    let mut doc = json!({ "command": command, "config": echo });
    if let (Some(d), serde_json::Value::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn tabular_only(format: OutputFormat, command: &str) -> Result<()> {
    if format == OutputFormat::Text {
        return Err(Error::Config(format!(
            "{command} writes csv or json, not text"
        )));
    }
    Ok(())
}

pub fn render_sweep(
    result: &SweepResult,
    echo: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    tabular_only(format, "sweep")?;
    if format == OutputFormat::Json {
        return json_doc("sweep", echo, json!({ "rows": result.rows }));
    }
    let mut s = csv_header(echo, "sweep")?;
    s.push_str(&SWEEP_COLUMNS.join(","));
    s.push('\n');
    for r in &result.rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n,
            r.l_normal_sim,
            r.l_threat_sim,
            r.l_threat_exact,
            opt(r.l_threat_percolation),
            r.ratio
        )
        .unwrap();
    }
    Ok(s)
}

pub fn render_thresholds(
    reports: &[ThresholdReport],
    echo: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    tabular_only(format, "lattice-threshold")?;
    if format == OutputFormat::Json {
        return json_doc("lattice-threshold", echo, json!({ "rows": reports }));
    }
    let mut s = csv_header(echo, "lattice-threshold")?;
    s.push_str(&THRESHOLD_COLUMNS.join(","));
    s.push('\n');
    for r in reports {
        let method = match r.method {
            crate::lattice::EstimateMethod::Analytic => "analytic",
            crate::lattice::EstimateMethod::Bisection => "bisection",
        };
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.geometry,
            r.z,
            r.reference_pc,
            r.estimated_pc,
            r.half_width,
            method,
            r.lattice_size,
            r.sites,
            r.trials,
            r.seed
        )
        .unwrap();
    }
    Ok(s)
}

pub fn render_spacing(
    hist: &SpacingHistogram,
    grid_points: usize,
    echo: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    tabular_only(format, "spacing-cdf")?;
    let grid = hist.cdf_grid(grid_points);
    let ks = hist.ks_to_exponential();
    if format == OutputFormat::Json {
        return json_doc(
            "spacing-cdf",
            echo,
            json!({ "n": hist.n, "samples": hist.samples.len(), "ks_exponential": ks, "rows": grid }),
        );
    }
    let mut s = csv_header(echo, "spacing-cdf")?;
    writeln!(s, "# ks_exponential = {ks}").unwrap();
    s.push_str(&SPACING_COLUMNS.join(","));
    s.push('\n');
    for p in &grid {
        writeln!(s, "{},{},{}", p.latitude, p.empirical, p.exponential).unwrap();
    }
    Ok(s)
}

pub fn render_exact(
    report: &ExactReport,
    echo: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => json_doc("exact", echo, json!({ "report": report })),
        OutputFormat::Csv => {
            let mut s = csv_header(echo, "exact")?;
            s.push_str("N,l_min,occupation_probability,n_threat_expected,l_exact,l_percolation,n_min,min_threat_latitude,e_l_min,regime\n");
            let r = report;
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.l_min,
                r.occupation_probability,
                r.n_threat_expected,
                r.l_exact,
                r.l_percolation,
                r.n_min,
                r.min_threat_latitude,
                r.e_l_min,
                r.regime
            )
            .unwrap();
            Ok(s)
        }
        OutputFormat::Text => {
            let r = report;
            Ok(format!(
                "N = {}, L_min = {}\n\
                 occupation probability P(N, L_min) = {:.6}\n\
                 expected threat boundaries         = {:.6}\n\
                 exact threat latitude              = {:.6}\n\
                 percolation threat latitude        = {:.6}\n\
                 N_min                              = {}\n\
                 minimum threat latitude            = {:.6} (e * L_min = {:.6})\n\
                 regime                             = {}\n",
                r.n,
                r.l_min,
                r.occupation_probability,
                r.n_threat_expected,
                r.l_exact,
                r.l_percolation,
                r.n_min,
                r.min_threat_latitude,
                r.e_l_min,
                r.regime
            ))
        }
    }
}

pub fn render_regime(
    report: &RegimeReport,
    echo: &RunConfig,
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => json_doc("classify", echo, json!({ "report": report })),
        OutputFormat::Csv => {
            let mut s = csv_header(echo, "classify")?;
            s.push_str("regime,N,l_min,n_min,l_normal,l_threat_exact,ratio,distance_to_tipping\n");
            let r = report;
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.regime,
                r.n,
                r.l_min,
                r.n_min_value,
                r.l_normal,
                r.l_threat_exact,
                r.ratio,
                r.distance_to_tipping
            )
            .unwrap();
            Ok(s)
        }
        OutputFormat::Text => {
            let r = report;
            Ok(format!(
                "regime: {}\n\
                 N = {} rules, L_min = {}, N_min = {}\n\
                 N / N_min = {:.4}\n\
                 normal latitude 1/(N+1) = {:.6}\n\
                 exact threat latitude   = {:.6}\n\
                 threat / normal ratio   = {:.4}\n",
                r.regime,
                r.n,
                r.l_min,
                r.n_min_value,
                r.distance_to_tipping,
                r.l_normal,
                r.l_threat_exact,
                r.ratio
            ))
        }
    }
}
