use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a type invariant (unsorted boundaries, out-of-range values, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// Argument outside the mathematical domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity that diverges at or above the percolation threshold.
    #[error("numerical divergence: {0}")]
    Divergence(String),

    #[error("unsupported lattice geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("threshold bisection did not converge after {depth} steps (bracket [{lo}, {hi}])")]
    NonConvergence { depth: usize, lo: f64, hi: f64 },

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
