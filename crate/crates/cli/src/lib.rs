//! Command-line front end for the ranging simulator: run configuration,
//! CSV outputs, SVG plots and the subcommand drivers.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;

use std::fmt;

/// Errors surfaced to the user, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or arguments.
    #[error("configuration error: {0}")]
    Config(String),
    /// Failure while running or writing results.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
        }
    }

    pub(crate) fn from_config(e: qir_core::Error) -> Self {
        Self::Config(e.to_string())
    }

    pub(crate) fn from_runtime(e: impl fmt::Display) -> Self {
        Self::Runtime(e.to_string())
    }
}
