use std::io;

use seqmon::{DenseError, DiscreteError, ParseError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse formula: {0}")]
    Parse(#[from] ParseError),
    /// A malformed input row; `row` counts data rows from 1.
    #[error("row {row}: {msg}")]
    Row { row: u64, msg: String },
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Row { .. } | CliError::Data(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<DiscreteError> for CliError {
    fn from(e: DiscreteError) -> Self {
        match e {
            DiscreteError::NonIntegerBound(_) | DiscreteError::AlreadyRunning => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<DenseError> for CliError {
    fn from(e: DenseError) -> Self {
        match e {
            DenseError::Formula(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
