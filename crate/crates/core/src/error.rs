use thiserror::Error;

use crate::algebra::Variety;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variety mismatch: {0} vs {1}")]
    VarietyMismatch(Variety, Variety),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("subset is not a subalgebra")]
    NotSubalgebra,
    #[error("subset is not a normal subobject")]
    NotNormal,
    #[error("{op} is not supported for {what}")]
    Unsupported { op: String, what: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("size budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn unsupported(op: &str, what: impl ToString) -> Error {
    Error::Unsupported { op: op.to_string(), what: what.to_string() }
}
