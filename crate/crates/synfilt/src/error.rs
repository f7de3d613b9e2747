//! Crate-wide error type.

/// Errors reported by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range for [{n}]")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("invalid order-preserving map: {0}")]
    InvalidMap(String),

    #[error("invalid barycentric weights: {0}")]
    InvalidWeights(String),

    #[error("invalid context digits: {0}")]
    InvalidDigits(String),

    #[error("rational out of range: {0}")]
    RationalOutOfRange(String),

    #[error("invalid probability space: {0}")]
    InvalidSpace(String),

    #[error("map is not null-preserving: {0}")]
    NotNullPreserving(String),

    #[error("invalid Dirichlet parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observation at time {observed} does not match the anchor time {anchor}")]
    ObservationTimeMismatch { observed: usize, anchor: usize },

    #[error("time {requested} lies beyond the anchor time {anchor}; the future is constrained, not determined")]
    FutureNotDetermined { requested: usize, anchor: usize },

    #[error("split fraction {0} must lie in [0, 1]")]
    InvalidFraction(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
