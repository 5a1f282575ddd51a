// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

/// Command failure carrying its process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown names, or parameters outside the envelope (exit 2).
    Usage(String),
    /// Runtime failure after arguments were accepted (exit 1).
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Failure(m) => f.write_str(m),
        }
    }
}

impl From<mesq::Error> for CliError {
    fn from(e: mesq::Error) -> Self {
        match e {
            mesq::Error::Numeric(_) => Self::Failure(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Failure(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Failure(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Failure(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
