//! Job configuration and subcommands of the `helicoid` binary.

pub mod commands;
pub mod config;

use std::path::PathBuf;

pub use config::JobConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl From<helicoid::Error> for CliError {
    fn from(e: helicoid::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(..) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}
