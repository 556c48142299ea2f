//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by kernels, certificates, solvers and the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pivot (or singular value) fell below the rank tolerance where a
    /// nonsingular matrix was required.
    #[error("singular matrix: {context}")]
    SingularMatrix { context: String },

    /// A + B is singular, so the complementarity reduction does not exist.
    #[error("A + B is singular; the complementarity reduction is undefined")]
    SingularSum,

    /// An iteration hit its cap without meeting its convergence test.
    /// `best` carries the last estimate so callers can decide what to do.
    #[error("{what} did not converge within {limit} iterations")]
    NoConvergence {
        what: &'static str,
        limit: usize,
        best: f64,
    },

    /// An exponential sweep was requested above its dimension cap.
    #[error("dimension {n} exceeds the cap {cap} for this operation")]
    CapExceeded { n: usize, cap: usize },

    /// A diagonal entry lies outside the declared box.
    #[error("entry {index} = {value} outside [{lower}, {upper}]")]
    RangeViolation {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// Malformed input file.
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    /// Shape mismatch or out-of-range index.
    #[error("dimension error: {0}")]
    DimensionError(String),

    /// A non-finite value reached a constructor.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Two certificates that must agree by theorem disagreed; this signals
    /// an implementation bug, never a property of the instance.
    #[error("internal inconsistency: {0}")]
    InconsistencyDetected(String),

    /// Invalid run configuration or ensemble specification.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// File I/O failure (path + message; kept stringly so the error stays Clone).
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    /// Stable machine-readable code for the CLI error document.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::SingularSum => "singular_sum",
            Error::NoConvergence { .. } => "no_convergence",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::RangeViolation { .. } => "range_violation",
            Error::ParseError { .. } => "parse_error",
            Error::DimensionError(_) => "dimension_error",
            Error::NonFinite(_) => "non_finite",
            Error::InconsistencyDetected(_) => "inconsistency_detected",
            Error::Config(_) => "config_error",
            Error::Io { .. } => "io_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
