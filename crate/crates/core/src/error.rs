use thiserror::Error;

/// Errors raised by the scoring, combining and pipeline stages.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty column")]
    EmptyColumn,

    #[error("degenerate response: `{0}` takes a single value")]
    DegenerateResponse(String),

    #[error("column `{column}` has {found} rows, expected {expected}")]
    LengthMismatch {
        column: String,
        expected: usize,
        found: usize,
    },

    #[error("column `{column}` is not binary: {reason}")]
    NotBinary { column: String, reason: String },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("no usable partitions")]
    NoUsablePartitions,

    #[error("REML did not converge after {iterations} iterations")]
    RemlNotConverged { iterations: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("row {row} has no partition assignment for group `{key}`")]
    UnassignedGroup { row: usize, key: String },

    #[error("fixture `{name}` is malformed: {reason}")]
    Fixture { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
