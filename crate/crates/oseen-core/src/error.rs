//! Crate-wide error type.
//!
//! The taxonomy mirrors how callers should react:
//!
//! * [`Error::Domain`] — a scalar argument is outside the mathematical
//!   domain of the function (e.g. `σ(r)` with `r ≤ 0`). Caller bug.
//! * [`Error::Config`] — the requested combination of parameters is not
//!   meaningful (e.g. an empty case interval, or a fit over too narrow a
//!   range). Fix the configuration.
//! * [`Error::Precondition`] — a stated precondition of a numerical routine
//!   is violated (e.g. a bound that only exists for `k ≥ 3` requested at
//!   `k = 2`, or a dense decomposition above the size cap).
//! * [`Error::Numerical`] — the computation ran but its output is not
//!   trustworthy (non-finite values, instability across grid refinement).
//! * [`Error::Internal`] — an invariant the crate itself guarantees failed;
//!   always a bug, never a user error.

use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter combination is not meaningful for the requested operation.
    #[error("configuration error: {0}")]
    Config(String),

    /// A stated precondition of a numerical routine is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The computation produced output that cannot be trusted.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An internal invariant failed; this is a bug in the crate.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Build a [`Error::Domain`] from anything displayable.
    pub fn domain(msg: impl std::fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }

    /// Build a [`Error::Config`] from anything displayable.
    pub fn config(msg: impl std::fmt::Display) -> Self {
        Error::Config(msg.to_string())
    }

    /// Build a [`Error::Precondition`] from anything displayable.
    pub fn precondition(msg: impl std::fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }

    /// Build a [`Error::Numerical`] from anything displayable.
    pub fn numerical(msg: impl std::fmt::Display) -> Self {
        Error::Numerical(msg.to_string())
    }

    /// Build a [`Error::Internal`] from anything displayable.
    pub fn internal(msg: impl std::fmt::Display) -> Self {
        Error::Internal(msg.to_string())
    }
}
