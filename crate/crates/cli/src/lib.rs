//! Experiment harness: configuration, deterministic replica scheduling and
//! the canonical experiments, exposed as a library so the acceptance suite
//! can drive them directly.

pub mod config;
pub mod experiments;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Unusable configuration (exit code 2).
    Config(String),
    /// Filesystem failure (exit code 3).
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<oriented_walk::CoreError> for CliError {
    fn from(e: oriented_walk::CoreError) -> Self {
        CliError::Config(e.to_string())
    }
}
