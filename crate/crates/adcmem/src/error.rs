use thiserror::Error;

/// Failure modes surfaced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension or count is outside the supported range.
    #[error("size: {0}")]
    Size(String),
    /// A scalar argument is outside its physical domain.
    #[error("domain: {0}")]
    Domain(String),
    /// Inputs violate a structural precondition (shape mismatch, non-Hermitian
    /// matrix, incomplete Kraus set, ...).
    #[error("contract: {0}")]
    Contract(String),
    /// A numerical procedure could not reach its accuracy target.
    #[error("numeric: {0}")]
    Numeric(String),
    /// An internal consistency check failed; this indicates a bug, not bad input.
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
