use num_rational::BigRational;
use thiserror::Error;

/// Errors raised by channel, ranking and oracle operations.
///
/// Row, column and index fields are 1-based so they can be shown to users
/// verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("channel grid is empty")]
    EmptyGrid,
    #[error("row {row} has {found} entries, expected {expected}")]
    NotRectangular {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("negative entry at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} sums to {actual}, expected 1")]
    RowSumViolation { row: usize, actual: BigRational },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("column {column} has tied entries")]
    UnstableColumn { column: usize },
    #[error("channel {channel} is unstable: column {column} has tied entries")]
    UnstableChannel {
        channel: &'static str,
        column: usize,
    },
    #[error("{what} = {n} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("invalid weak order: {0}")]
    InvalidWeakOrder(String),
    #[error("bad prior: {0}")]
    BadPrior(String),
    #[error("code is empty")]
    EmptyCode,
    #[error("code member {member} outside 1..={n}")]
    CodeOutOfRange { member: usize, n: usize },
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims(n: usize, m: usize) -> String {
    format!("{n}x{m}")
}
