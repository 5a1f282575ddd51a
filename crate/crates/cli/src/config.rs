// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Plain `key=value` configuration files. Flags override file values.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{usage, CliResult};

const KEYS: &[&str] = &[
    "suite",
    "n",
    "cutoff",
    "tol",
    "seed",
    "json",
    "csv",
    "param",
    "from",
    "to",
    "steps",
    "observables",
    "beta-chi",
    "label",
    "variant",
    "r",
    "format",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key=value", no + 1));
            };
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return usage(format!("config line {}: unknown key '{}'", no + 1, k.trim()));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).or_else(|_| usage(format!("config value for '{key}' is invalid: {v}"))),
        }
    }

    /// The flag if given, otherwise the file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
