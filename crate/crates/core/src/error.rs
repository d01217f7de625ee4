use thiserror::Error;

pub type Result<T> = std::result::Result<T, TraceError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    /// Malformed sample data: unsorted, duplicated or non-finite coordinates,
    /// mismatched lengths.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numeric parameter (`m`, `p`, table order, window, grid) is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The point set is too small for the requested functional.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("point set of size {size} exceeds the enumeration cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The requested integral or supremum is infinite.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
