//! Crate-wide error type and result alias.

use std::path::PathBuf;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by ingestion, estimation, and the statistical tests.
///
/// The CLI maps these onto process exit codes: ingestion failures are data
/// errors, estimation/test failures are numerical errors. The library itself
/// attaches no exit semantics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input file does not exist or could not be opened.
    #[error("input file not found: {0}")]
    FileNotFound(PathBuf),

    /// A CSV row could not be interpreted under the configured schema.
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    /// A price of zero or below (or a non-finite price) was encountered.
    #[error("non-positive or non-finite price at line {line}")]
    NonPositivePrice { line: usize },

    /// Observation dates must be strictly increasing.
    #[error("dates not strictly increasing at line {line}")]
    UnsortedDates { line: usize },

    /// Aligning series left no common dates.
    #[error("no common dates across the input series")]
    EmptyIntersection,

    /// The series is too short for the requested operation.
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    /// Two inputs that must agree in length do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The regression design matrix is singular or numerically near-singular.
    #[error("rank-deficient design matrix")]
    RankDeficient,

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The series has zero variance where a scale is required.
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    /// A window inside the scan has zero variance; it is flagged and skipped.
    #[error("degenerate (zero-variance) window at index {index}")]
    DegenerateWindow { index: usize },

    /// A lag exceeds what the series length supports.
    #[error("lag {lag} too large for series of length {len}")]
    LagTooLarge { lag: usize, len: usize },

    /// The window-plan exponent must lie strictly inside (0, 0.5).
    #[error("window exponent must lie in (0, 0.5), got {0}")]
    BadExponent(f64),

    /// The estimated asymptotic variance is non-positive, so the statistic
    /// is undefined; usually signals an unsuitable epsilon grid.
    #[error("variance estimate collapsed to a non-positive value: {0}")]
    VarianceCollapse(String),

    /// An iterative special-function evaluation failed to converge.
    #[error("iteration failed to converge: {0}")]
    ConvergenceFailure(&'static str),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Underlying CSV reader failure.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
