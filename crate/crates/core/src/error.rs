use thiserror::Error;

/// Errors raised by the classification and simulation engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch { expected: usize, actual: usize, context: &'static str },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(u32),

    #[error("{what} = {value} exceeds the supported limit of {limit}")]
    Resource { what: &'static str, value: usize, limit: usize },

    #[error(
        "norm drifted by {drift:.3e} (tolerance {tolerance:.1e}) at t = {time}; retry with dt < {suggested_dt:.3e}"
    )]
    Integration { drift: f64, tolerance: f64, time: f64, suggested_dt: f64 },

    #[error("state has no weight inside the subspace; projection is undefined")]
    ProjectionUndefined,

    #[error("malformed spectrum: {0}")]
    MalformedSpectrum(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
