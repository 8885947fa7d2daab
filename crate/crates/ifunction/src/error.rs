use thiserror::Error;
use wallx_series::SeriesError;
use wallx_target::TargetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IError {
    #[error("convex twist {twist} has negative degree {degree} on class {beta:?}")]
    InvalidTwist { twist: usize, degree: i64, beta: Vec<i64> },
    #[error("concave twist {twist} has positive degree {degree} on class {beta:?}")]
    InvalidConcave { twist: usize, degree: i64, beta: Vec<i64> },
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("non-equivariant limit is singular: {0}")]
    SingularLimit(String),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
