use thiserror::Error;

/// Errors raised by the frame, multiplier and suite machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("cannot split {points} points into {parts} nonempty parts")]
    InfeasiblePartition { parts: usize, points: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("operator is not invertible: smallest singular value {sigma_min:e} (largest {sigma_max:e})")]
    NotInvertible { sigma_min: f64, sigma_max: f64 },

    #[error("family is not a frame: optimal lower bound {lower:e}")]
    NotAFrame { lower: f64 },

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
