use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system is underdetermined ({0} free parameters)")]
    NotUnique(usize),
}
