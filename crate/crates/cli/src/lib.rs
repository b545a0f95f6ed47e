//! Command-line driver: configuration, dispatch to the pipelines, and
//! persistence of JSON reports and CSV tables.

mod commands;
pub mod config;
pub mod fixtures;
pub mod report;
pub mod selftest;

pub use config::{Cli, Command, RunConfig};
pub use report::{Outcome, RunReport, Table, Verdict};

use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or configuration (exit code 2).
    #[error("{0}")]
    Parse(String),
    /// Computation or I/O failure (exit code 3).
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub(crate) fn json(path: &Path, e: &serde_json::Error) -> Self {
        // serde_json messages end with "at line L column C"
        CliError::Parse(format!("{}: {e}", path.display()))
    }

    pub(crate) fn internal(e: impl std::fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Run the pipeline selected by `config`.
pub fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    commands::run(config)
}

/// Exit code of a finished run: 0 iff every asserted invariant passed.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.report.passed() {
        0
    } else {
        1
    }
}
