//! Library half of the command-line front end; the binary in `main.rs` is a
//! thin clap wrapper around these modules.

pub mod commands;
pub mod output;
pub mod parse;

use qutrit_teleport::Error;

/// CLI-level failure classification, mapped onto exit codes:
/// 0 success, 1 verification failure, 2 usage error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Configuration(msg) => CliError::Usage(msg),
            other => CliError::Failure(other.to_string()),
        }
    }
}

/// What `dump` prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ObjectArg {
    Basis,
    Channels,
    Operators,
}
