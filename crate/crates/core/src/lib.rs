//! Rule boundaries, insider-threat latitude and site percolation.
//!
//! * [`spacing`]: boundaries, latitudes and threat-side boundary elimination.
//! * [`montecarlo`]: seeded, trial-averaged sweeps over the rule count.
//! * [`analytic`]: closed forms for the exact and percolation predictions.
//! * [`lattice`]: finite-lattice site percolation and threshold estimates.
//! * [`regime`]: classification of an `(N, L_min)` environment.

pub mod analytic;
pub mod config;
pub mod error;
pub mod lattice;
pub mod montecarlo;
pub mod output;
pub mod regime;
pub mod rng;
pub mod spacing;

pub use error::{Error, Result};
