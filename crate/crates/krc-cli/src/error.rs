//! Errors of the command-line layer.

use krc_core::KrcError;
use thiserror::Error;

/// Anything that makes a command exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// A malformed input file.
    #[error("line {line}: {msg}")]
    Syntax {
        /// 1-based line number.
        line: usize,
        /// What is wrong.
        msg: String,
    },
    /// A library error.
    #[error(transparent)]
    Core(#[from] KrcError),
    /// Bad or missing command-line arguments.
    #[error("{0}")]
    Usage(String),
    /// A file could not be read or written.
    #[error("{path}: {source}")]
    Io {
        /// The file.
        path: String,
        /// The cause.
        source: std::io::Error,
    },
}

/// Result alias of the command-line layer.
pub type CliResult<T> = std::result::Result<T, CliError>;
