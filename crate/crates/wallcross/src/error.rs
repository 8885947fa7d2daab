use thiserror::Error;
use wallx_ifunction::IError;
use wallx_oracle::OracleError;
use wallx_series::SeriesError;
use wallx_target::TargetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WallError {
    #[error("bracket outside the provider envelope: {0}")]
    OutOfEnvelope(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("no solution at fixed point {fixed_point}, {key}: y^{y_power} z^{z_exp} coefficient {value}")]
    NoSolution { fixed_point: usize, key: String, y_power: usize, z_exp: i32, value: String },
    #[error("fixed point {fixed_point}, {key}: z^{z_exp} coefficient is not homogeneous of degree {degree}")]
    Inhomogeneous { fixed_point: usize, key: String, z_exp: i32, degree: i64 },
    #[error("underdetermined at {0}")]
    NonUnique(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no annihilating operator of order {0}")]
    NotFound(usize),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    IFunction(#[from] IError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Target(#[from] TargetError),
}
