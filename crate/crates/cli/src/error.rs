use thiserror::Error;
use wallx_ifunction::IError;
use wallx_oracle::OracleError;
use wallx_series::SeriesError;
use wallx_target::TargetError;
use wallx_wallcross::WallError;

/// Failures grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) | CliError::Io(_) => EXIT_VALIDATION,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
        }
    }
}

impl From<WallError> for CliError {
    fn from(e: WallError) -> Self {
        match e {
            WallError::Inconsistent(_)
            | WallError::NoSolution { .. }
            | WallError::Inhomogeneous { .. }
            | WallError::NonUnique(_)
            | WallError::Internal(_) => CliError::Inconsistent(e.to_string()),
            WallError::Oracle(o) => o.into(),
            WallError::IFunction(i) => i.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NotConstant(_) => CliError::Inconsistent(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<IError> for CliError {
    fn from(e: IError) -> Self {
        match e {
            IError::Shape(_) | IError::SingularLimit(_) => CliError::Inconsistent(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<TargetError> for CliError {
    fn from(e: TargetError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Validation(e.to_string())
    }
}
