use thiserror::Error;

/// Errors surfaced by the solver, the linear-algebra kernels, and file I/O.
///
/// Breakdown and non-finite iterates are *errors* at the single-step level
/// but are folded into [`crate::solver::StopReason`] by the solve loops so
/// that partial histories stay inspectable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is numerically singular at elimination column {column}")]
    SingularMatrix { column: usize },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("breakdown at iteration {iteration}: d^T A d = {dtad:e} with ||d||^2 = {d_norm_sq:e}")]
    Breakdown {
        iteration: usize,
        dtad: f64,
        d_norm_sq: f64,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
