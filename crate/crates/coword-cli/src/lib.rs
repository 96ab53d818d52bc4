//! Library side of the `coword` command-line tool: configuration
//! resolution, the subcommand implementations, and run manifests.

use thiserror::Error;

pub mod commands;
pub mod config;
pub mod manifest;

/// Command failures, carrying their process exit code: 1 for usage and
/// configuration problems, 2 for input parse errors, 3 for analyses that
/// end empty (nothing survives pruning or clustering).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Parse(String),

    #[error("{0}")]
    EmptyAnalysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::EmptyAnalysis(_) => 3,
        }
    }
}

/// Folds a command result into a process exit code, reporting errors on
/// stderr.
pub fn exit_code(result: Result<(), CliError>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}
