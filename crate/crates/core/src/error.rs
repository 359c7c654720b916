use thiserror::Error;

/// Errors raised by the numerical laboratory.
///
/// Numeric payloads are stored as `f64` so one error type serves every scalar width.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})"
    )]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("function undefined at eigenvalue {eigenvalue}")]
    ScalarDomain { eigenvalue: f64 },

    #[error("spectrum outside the function domain at eigenvalue tuple {tuple:?}")]
    SpectrumDomain { tuple: Vec<f64> },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tensor space of dimension {dim} exceeds the cap of {cap}")]
    CapacityExceeded { dim: usize, cap: usize },

    #[error("missing derivative callback of order {order} at coincident nodes")]
    MissingDerivative { order: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampling failed after {retries} retries: {reason}")]
    SamplingExhausted { retries: usize, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
