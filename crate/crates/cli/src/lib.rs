//! Library side of the `maxcorr` binary: argument types and command execution.

pub mod args;
mod commands;
pub mod format;
pub mod grid;

use thiserror::Error;

pub use args::Cli;
pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] maxcorr::Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

/// Rendered command output and whether its checks held.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub ok: bool,
}

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
