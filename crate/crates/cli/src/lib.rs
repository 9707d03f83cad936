//! Library side of the `lu-invar` command: file formats, text rendering, the
//! embedded self-test and the command implementations.

pub mod app;
pub mod files;
pub mod render;
pub mod selftest;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    /// Inconclusive verdict or plain success.
    pub const OK: i32 = 0;
    /// Not-equivalent verdict, self-consistency or self-test failure.
    pub const FAILED: i32 = 1;
    /// I/O, parse or usage error.
    pub const USAGE: i32 = 2;
    /// The input parsed but is not a valid state.
    pub const VALIDATION: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid state file: {0}")]
    Format(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Validation(#[from] lu_invar_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Format(_) | CliError::Usage(_) => exit::USAGE,
            CliError::Validation(_) => exit::VALIDATION,
        }
    }
}
