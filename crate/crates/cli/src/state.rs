// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON dumps of ideal and regularized entangled states.

use mesq::fock::FockSpace;
use mesq::states::{self, StateLabel, Variant};
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliResult};
use crate::output::SCHEMA;
use crate::verify::{MAX_FOCK_DIMENSION, MAX_FOCK_MODES, MAX_GAUSSIAN_MODES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelDump {
    pub variant: String,
    pub scalar: f64,
    pub rest: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub index: usize,
    pub occupation: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateBody {
    /// Coefficients of the unnormalized series; `prefactor` multiplies all
    /// of them.
    Ideal { cutoff: usize, prefactor: f64, coefficients: Vec<Coefficient> },
    Regularized { r: f64, mean: Vec<f64>, cov: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub schema: String,
    pub n: usize,
    pub label: LabelDump,
    #[serde(flatten)]
    pub body: StateBody,
}

pub fn parse_variant(s: &str) -> CliResult<Variant> {
    match s {
        "pchi" => Ok(Variant::PChi),
        "chip" => Ok(Variant::ChiP),
        _ => usage(format!("unknown variant '{s}' (expected pchi or chip)")),
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::PChi => "pchi",
        Variant::ChiP => "chip",
    }
}

/// Comma-separated `scalar,rest₂,…,restₙ`; an empty string means the zero label.
pub fn parse_label(variant: Variant, n: usize, text: &str) -> CliResult<StateLabel> {
    if text.trim().is_empty() {
        return Ok(StateLabel::zero(variant, n)?);
    }
    let vals = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().or_else(|_| usage(format!("label entry '{s}' is not a number"))))
        .collect::<CliResult<Vec<_>>>()?;
    if vals.len() != n {
        return usage(format!("label has {} entries, expected {n}", vals.len()));
    }
    Ok(StateLabel::new(variant, vals[0], vals[1..].to_vec())?)
}

pub fn dump(n: usize, label: &StateLabel, cutoff: usize, r: Option<f64>) -> CliResult<StateDump> {
    let label_dump = LabelDump {
        variant: variant_name(label.variant()).into(),
        scalar: label.scalar(),
        rest: label.rest().to_vec(),
    };
    let body = match r {
        Some(r) => {
            if n > MAX_GAUSSIAN_MODES {
                return usage(format!("n must be at most {MAX_GAUSSIAN_MODES}"));
            }
            if !(r >= 0.0) || !r.is_finite() {
                return usage("r must be finite and non-negative");
            }
            let s = states::regularized_entangled_state(n, label, r)?.gaussian;
            let cov = s.cov();
            StateBody::Regularized {
                r,
                mean: s.mean().iter().copied().collect(),
                cov: (0..cov.nrows()).map(|i| cov.row(i).iter().copied().collect()).collect(),
            }
        }
        None => {
            if n > MAX_FOCK_MODES || (cutoff as f64).powi(n as i32) > MAX_FOCK_DIMENSION as f64 {
                return usage(format!("cutoff {cutoff} with {n} modes exceeds the Fock envelope"));
            }
            let space = FockSpace::new(n, cutoff)?;
            let ideal = states::ideal_entangled_vector(space, label)?;
            let coefficients = ideal
                .vector
                .coeffs()
                .iter()
                .enumerate()
                .map(|(index, z)| Coefficient { index, occupation: space.occupation(index), re: z.re, im: z.im })
                .collect();
            StateBody::Ideal { cutoff, prefactor: ideal.prefactor, coefficients }
        }
    };
    Ok(StateDump { schema: SCHEMA.into(), n, label: label_dump, body })
}
