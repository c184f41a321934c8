use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {value} lies outside the kernel domain {domain}")]
    Domain { value: f64, domain: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("resource guard exceeded: {0}")]
    ResourceLimit(String),

    /// The truncated univariate spectrum does not determine the requested quantity.
    #[error("truncation too shallow: {reason} (need at least {required} univariate eigenvalues)")]
    Truncation { reason: String, required: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
