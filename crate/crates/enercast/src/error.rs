//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A series is shorter than an operation requires.
    #[error("insufficient data: {context} needs at least {needed} observations, got {got}")]
    InsufficientData {
        needed: usize,
        got: usize,
        context: String,
    },

    /// A series failed its construction invariants.
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// A flag or argument is outside its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A CSV cell or row could not be parsed. Row numbers are 1-based and
    /// count the header as row 1.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// Cleaning removed every column.
    #[error("empty dataset: all {0} columns were dropped")]
    EmptyDataset(usize),

    /// Two paired vectors have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// MAPE is undefined when an actual value is zero.
    #[error("mape undefined: actual value at index {index} is zero")]
    ZeroActual { index: usize },

    /// Coefficient vectors do not match the declared model order.
    #[error("dimension mismatch: expected {expected} {what} coefficients, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    /// A coefficient vector violates the stationarity/invertibility root
    /// condition.
    #[error("non-stationary coefficients: {0}")]
    NonStationary(String),

    /// Every candidate in a grid search failed or was skipped.
    #[error("no model could be fitted: {}", reasons.join("; "))]
    AllCandidatesFailed { reasons: Vec<String> },

    /// Requested horizon exceeds the configured maximum.
    #[error("horizon {horizon} exceeds maximum {max}")]
    HorizonTooLarge { horizon: usize, max: usize },

    /// A file could not be read or written.
    #[error("i/o error on {path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
