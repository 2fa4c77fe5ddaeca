//! Flat, human-editable run configuration.
//!
//! Every key is optional; unset keys fall back to per-command defaults. The
//! document is TOML, e.g.
//!
//! ```toml
//! trials = 100
//! n_max = 1000
//! l_min = 0.01
//! seed = 1
//! format = "csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeGeometry, LatticeKind};
use crate::montecarlo::SimulationConfig;
use crate::regime::RegimeCutoffs;

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_N_MAX: usize = 1000;
pub const DEFAULT_L_MIN: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_LATTICE_TRIALS: usize = 200;
pub const DEFAULT_LATTICE_SIZE: usize = 128;
/// Depth of the tree built for a Bethe geometry.
pub const BETHE_GENERATIONS: usize = 6;
pub const DEFAULT_BETHE_Z: u32 = 3;
pub const DEFAULT_GRID_POINTS: usize = 200;
pub const DEFAULT_SPACING_N: usize = 100;
pub const DEFAULT_SPACING_TRIALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Text => "text",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::Config(format!(
                "unknown output format '{s}' (csv, json, text)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "seed_repr")]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per core. Never affects results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incremental: Option<bool>,
    /// Rule count for `exact`, `classify` and `spacing-cdf`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Coordination for a bare `bethe` geometry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_possibly_optimal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_tipping_point: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_over_regulated: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Seeds above `i64::MAX` do not fit a TOML integer and are written as strings.
mod seed_repr {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match seed {
            Some(v) => match i64::try_from(*v) {
                Ok(i) => s.serialize_i64(i),
                Err(_) => s.serialize_str(&v.to_string()),
            },
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Int(i)) => u64::try_from(i)
                .map(Some)
                .map_err(|_| de::Error::custom(format!("seed {i} is negative"))),
            Some(Repr::Str(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| de::Error::custom(format!("seed '{s}' is not an unsigned integer"))),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> std::io::Result<Result<Self>> {
        Ok(Self::from_toml_str(&std::fs::read_to_string(path)?))
    }

    /// Keys set in `overrides` replace those in `self`.
    pub fn merged_with(&self, overrides: &RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => {
                RunConfig { $($f: overrides.$f.clone().or_else(|| self.$f.clone()),)* }
            };
        }
        pick!(
            trials,
            n_max,
            l_min,
            seed,
            threads,
            incremental,
            n,
            geometry,
            size,
            z,
            grid_points,
            cutoff_possibly_optimal,
            cutoff_tipping_point,
            cutoff_over_regulated,
            format,
            out
        )
    }

    /// The parts that determine a command's output, for echoing into result
    /// files. Thread count and output path are dropped so files compare equal
    /// across them.
    pub fn echo(&self) -> RunConfig {
        RunConfig {
            threads: None,
            out: None,
            ..self.clone()
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn l_min(&self) -> f64 {
        self.l_min.unwrap_or(DEFAULT_L_MIN)
    }

    pub fn simulation(&self) -> Result<SimulationConfig> {
        Ok(SimulationConfig::new(
            self.trials.unwrap_or(DEFAULT_TRIALS),
            self.n_max.unwrap_or(DEFAULT_N_MAX),
            self.l_min(),
            self.seed(),
        )?
        .with_incremental(self.incremental.unwrap_or(true)))
    }

    pub fn cutoffs(&self) -> Result<RegimeCutoffs> {
        let d = RegimeCutoffs::default();
        let c = RegimeCutoffs {
            possibly_optimal: self.cutoff_possibly_optimal.unwrap_or(d.possibly_optimal),
            tipping_point: self.cutoff_tipping_point.unwrap_or(d.tipping_point),
            over_regulated: self.cutoff_over_regulated.unwrap_or(d.over_regulated),
        };
        c.validate()?;
        Ok(c)
    }

    /// Lattices named by `geometry` (default `square-2d`) at `size`.
    ///
    /// A bare `bethe` takes its coordination from `z`. Bethe lattices default
    /// to 6 generations rather than the regular-lattice side length.
    pub fn geometries(&self) -> Result<Vec<LatticeGeometry>> {
        let names = self
            .geometry
            .clone()
            .unwrap_or_else(|| vec!["square-2d".to_string()]);
        names
            .iter()
            .map(|name| {
                let kind = if name == "bethe" {
                    LatticeKind::Bethe(self.z.unwrap_or(DEFAULT_BETHE_Z))
                } else {
                    name.parse::<LatticeKind>()?
                };
                // Bethe thresholds are exact, so `size` only applies to grids.
                let size = match kind {
                    LatticeKind::Bethe(_) => BETHE_GENERATIONS,
                    _ => self.size.unwrap_or(DEFAULT_LATTICE_SIZE),
                };
                LatticeGeometry::new(kind, size)
            })
            .collect()
    }
}
