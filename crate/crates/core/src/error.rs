use thiserror::Error;

/// Failures raised by the engine.
///
/// `Validation` covers malformed or out-of-range input; `Internal` signals that
/// an exact identity the engine relies on did not hold (for example `d∘d ≠ 0`
/// or a non-integral character multiplicity). The CLI maps them to exit codes
/// 1 and 2 respectively.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("group order exceeds cap {cap} (reached {reached})")]
    OrderCap { cap: usize, reached: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for failures that indicate a bug or a violated identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
