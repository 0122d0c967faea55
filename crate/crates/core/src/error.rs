use thiserror::Error;

use crate::scalar::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields ({left} vs {right})")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("duplicate hyperplane in family")]
    DuplicateHyperplane,
    #[error("{0} must be nonzero")]
    ZeroScalar(&'static str),
    #[error("the zero vector does not define a hyperplane")]
    DegenerateNormal,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration limit exceeded: {needed} triples requested, limit {limit}")]
    LimitExceeded { needed: u128, limit: u64 },
    #[error("construction validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
