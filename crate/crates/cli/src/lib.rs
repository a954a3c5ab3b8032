//! Command-line orchestration for `zetakit`: argument parsing, JSON
//! reports, deterministic test-system generation and the verification
//! campaigns.
//!
//! The binary is a thin wrapper around [`commands::run`]; everything here is
//! usable from integration tests.

pub mod campaigns;
pub mod commands;
pub mod config;
pub mod render;
pub mod report;
pub mod suite;

use thiserror::Error;

/// Errors surfaced by the CLI, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// Anything raised by the library while computing (exit 1 unless it is
    /// an input-shaped error, see [`CliError::exit_code`]).
    #[error(transparent)]
    Core(#[from] zetakit::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use zetakit::Error as E;
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(
                E::NotPrime(_) | E::InvalidField(_) | E::ReducibleModulus(..) | E::InvalidSystem(_) | E::Parse(_) | E::Range(_),
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
