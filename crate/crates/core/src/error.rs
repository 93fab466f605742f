use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument or configuration value is invalid.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A query point lies outside the covered range (no extrapolation).
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Not enough data to perform the operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A least-squares problem has no unique solution.
    #[error("singular fit: {0}")]
    SingularFit(String),
    /// Constraints cannot be satisfied anywhere in the search domain.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Malformed input data (CSV/JSON contents).
    #[error("data error: {0}")]
    Data(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True when the error reflects bad caller input rather than bad data or
    /// a runtime failure. CLI maps validation to exit code 2, the rest to 3.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::OutOfRange(_) | Error::Infeasible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
