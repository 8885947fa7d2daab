use thiserror::Error;
use wallx_series::SeriesError;
use wallx_target::TargetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("moduli space of {0} marked points is unstable")]
    Unstable(usize),
    #[error("degree {degree} exceeds the oracle bound {bound}")]
    DegreeBound { degree: i64, bound: i64 },
    #[error("degenerate orbit data: {0}")]
    Degenerate(String),
    #[error("non-equivariant limit depends on the equivariant parameters: {0}")]
    NotConstant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
