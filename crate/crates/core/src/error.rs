// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the Fock and Gaussian engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("outside supported range: {0}")]
    Range(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
