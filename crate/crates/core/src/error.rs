//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix had the wrong length for the requested operation.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative method hit its iteration cap before reaching tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Conjugate gradient detected a direction of non-positive curvature.
    #[error("operator not positive definite: <p, Cp> = {0:.3e}")]
    NotPositiveDefinite(f64),

    /// A linear system was singular to working precision.
    #[error("singular system: pivot {0:.3e} below tolerance")]
    SingularSystem(f64),

    /// Requested an unregularized condition number of a rank-deficient matrix.
    #[error("infinite condition number: smallest singular value below cutoff and ratio = 0")]
    InfiniteCondition,

    /// Morozov search found no feasible regularization weight.
    #[error(
        "no feasible alpha: discrepancy {discrepancy:.6e} > bound {bound:.6e} at alpha = {alpha:.3e}"
    )]
    NoFeasibleAlpha {
        alpha: f64,
        discrepancy: f64,
        bound: f64,
    },

    /// Backprop was handed a cache that does not match the network.
    #[error("stale forward cache: {0}")]
    StaleCache(String),

    /// An operation that needs data received an empty collection.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A file could not be parsed; `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            actual,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
