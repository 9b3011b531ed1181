use thiserror::Error;

pub type Result<T> = std::result::Result<T, FloodError>;

#[derive(Debug, Error)]
pub enum FloodError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input admits no full-dimensional triangulation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A size guard refused the request instead of truncating it.
    #[error("guard violation: {0}")]
    Guard(String),

    /// A structural invariant (monotonicity, face order, mask contract) was violated.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("generation failed: {0}")]
    Generation(String),
}

impl FloodError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        FloodError::InvalidArgument(msg.into())
    }
}
