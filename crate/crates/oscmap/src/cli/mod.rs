//! Command-line layer: run configuration, the four subcommands, and the
//! CSV/report writers. Kept in the library so integration tests can drive
//! commands without spawning the binary.

pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

/// Errors at the command level, split by exit code: configuration problems
/// exit 2, numeric failures exit 3, I/O problems exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(crate::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    /// Wrap a library error that was triggered by user-supplied parameters,
    /// so it reports (and exits) as a configuration problem.
    pub fn config_from(err: crate::Error) -> Self {
        CliError::Config(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(err) => write!(f, "numeric failure: {err}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}
