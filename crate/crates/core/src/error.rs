use thiserror::Error;

use crate::domain::PointKind;

/// Errors raised by the library. Every failure mode is an input problem;
/// nothing here is retryable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: PointKind, found: PointKind },

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("sample mixes point kinds ({first} and {other})")]
    HeterogeneousSample { first: PointKind, other: PointKind },

    #[error("empty data passed to {0}")]
    EmptyData(&'static str),

    #[error("length mismatch in {context}: {left} vs {right}")]
    LengthMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("operation `{op}` is not supported for concept class {class}")]
    UnsupportedClass { op: &'static str, class: String },

    #[error("weights do not fit exact integer arithmetic after scaling")]
    WeightOverflow,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("iteration cap {cap} reached before the stopping rule fired")]
    IterationCapExceeded { cap: usize },

    #[error("instance does not match its construction: {0}")]
    ConstructionMismatch(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
