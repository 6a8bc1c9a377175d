//! Error type shared by the whole crate.
//!
//! Input errors are caused by caller-supplied data (bad colors, partitions
//! outside the required ground set, …). Internal errors signal that one of
//! the crate's own consistency checks failed — e.g. two independent bridge
//! computations disagreeing — and always indicate a bug, never bad input.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// The caller supplied invalid data.
    #[error("input error: {0}")]
    Input(String),
    /// An internal consistency check failed; this is a bug in the crate.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for errors of the [`Error::Input`] variant.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_))
    }
}
