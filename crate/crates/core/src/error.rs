use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a zero quaternion")]
    ZeroDivisor,
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point is not in the closure of the model: {0}")]
    NotInModel(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
