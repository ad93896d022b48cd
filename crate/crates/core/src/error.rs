use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("size {size} exceeds the configured cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("quadrature failed: {reason} (partial value {partial}, error estimate {error_estimate:e})")]
    Quadrature {
        reason: String,
        partial: f64,
        error_estimate: f64,
    },

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("numerical routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
