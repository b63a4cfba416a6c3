use thiserror::Error;

/// Errors raised by the engine. Every variant corresponds to a violated
/// precondition or malformed input; none are transient.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("partition is not a pair partition: {0}")]
    NotPairPartition(String),
    #[error("unknown label '{0}'")]
    MissingLabel(String),
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("pair weight table has no entry for {0}")]
    MissingWeight(String),
    #[error("missing table entry for {0}")]
    MissingEntry(String),
    #[error("invalid cumulant spec: {0}")]
    InvalidSpec(String),
    #[error("calculus mismatch: {0}")]
    CalculusMismatch(String),
    #[error("matrix precondition failed: {0}")]
    Matrix(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
