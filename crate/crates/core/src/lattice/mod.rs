//! Finite-lattice site percolation: lattice construction, random occupation,
//! union-find cluster labelling, spanning detection and threshold estimation.

mod build;
mod clusters;
mod geometry;
mod threshold;
pub mod union_find;

pub use build::{build_lattice, Lattice};
pub use clusters::{label_clusters, occupy, occupy_stream, site_uniforms, ClusterStats, Occupancy};
pub use geometry::{reference_thresholds, LatticeGeometry, LatticeKind, ReferenceThreshold};
pub use threshold::{
    critical_occupations, empirical_mean_cluster_size, estimate_threshold, estimate_threshold_with,
    mean_cluster_size_on, spanning_probability, spanning_probability_on, threshold_report,
    BisectionOptions, EstimateMethod, ThresholdEstimate, ThresholdReport,
};
