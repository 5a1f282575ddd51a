// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian-engine parameter sweeps written as CSV.

use std::collections::BTreeMap;
use std::str::FromStr;

use mesq::dynamics::{self, EprVariant, PumpSpec};
use mesq::gaussian;
use mesq::linalg::log_slope;
use mesq::states::{self, StateLabel, Variant};

use crate::error::{usage, CliResult};
use crate::output::fmt17;
use crate::verify::MAX_GAUSSIAN_MODES;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Lambda,
    R,
    T,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::R => "r",
            Self::T => "t",
        }
    }

    /// Observables available for this parameter, in column order.
    pub fn observables(self) -> &'static [&'static str] {
        match self {
            Self::Lambda => &["var_collective_X", "var_collective_Y", "uncertainty", "var_total_X", "var_relative_P"],
            Self::R => &["var_total_P", "var_relative_X", "var_total_X", "var_relative_P", "fidelity_regularized", "width_P"],
            Self::T => &["scale_sumP", "scale_relX", "var_total_P", "var_relative_X"],
        }
    }
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lambda" => Ok(Self::Lambda),
            "r" => Ok(Self::R),
            "t" => Ok(Self::T),
            _ => Err(format!("unknown sweep parameter '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub param_value: f64,
    pub observables: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: Param,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub observables: Vec<String>,
    pub n: usize,
    pub beta_chi: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.from < self.to) || !self.from.is_finite() || !self.to.is_finite() {
            return usage(format!("sweep needs from < to, got {} and {}", self.from, self.to));
        }
        if self.steps < 2 {
            return usage("sweep needs at least 2 steps");
        }
        if !(2..=MAX_GAUSSIAN_MODES).contains(&self.n) {
            return usage(format!("n must be in 2..={MAX_GAUSSIAN_MODES}, got {}", self.n));
        }
        if self.param != Param::Lambda && self.from < 0.0 {
            return usage(format!("{} must be non-negative", self.param.name()));
        }
        if self.observables.is_empty() {
            return usage("no observables requested");
        }
        for (i, o) in self.observables.iter().enumerate() {
            if self.observables[..i].contains(o) {
                return usage(format!("observable '{o}' requested twice"));
            }
            if !self.param.observables().contains(&o.as_str()) {
                return usage(format!("unknown observable '{o}' for parameter {}", self.param.name()));
            }
        }
        if self.observables.iter().any(|o| o == "fidelity_regularized") && self.n != 2 {
            return usage("fidelity_regularized is defined for n = 2");
        }
        Ok(())
    }
}

fn evaluate(spec: &SweepSpec, x: f64) -> CliResult<BTreeMap<String, f64>> {
    let n = spec.n;
    let mut out = BTreeMap::new();
    let want = |name: &str| spec.observables.iter().any(|o| o == name);
    match spec.param {
        Param::Lambda => {
            let s = dynamics::squeezed_vacuum_stats(n, x, None)?;
            let vals = [
                ("var_collective_X", s.var_x),
                ("var_collective_Y", s.var_y),
                ("uncertainty", s.uncertainty),
                ("var_total_X", s.var_total_x),
                ("var_relative_P", s.var_relative_p[0]),
            ];
            out.extend(vals.into_iter().filter(|(k, _)| want(k)).map(|(k, v)| (k.to_string(), v)));
        }
        Param::R => {
            let p = dynamics::generate_epr(n, x, EprVariant::PChiZero)?;
            let c = dynamics::generate_epr(n, x, EprVariant::ChiPZero)?;
            for name in &spec.observables {
                let v = match name.as_str() {
                    "var_total_P" => gaussian::quad_variance(&p, &states::total_momentum(n))?,
                    "var_relative_X" => gaussian::quad_variance(&p, &states::relative_coordinate(n, 1))?,
                    "var_total_X" => gaussian::quad_variance(&c, &states::total_coordinate(n))?,
                    "var_relative_P" => gaussian::quad_variance(&c, &states::relative_momentum(n, 1))?,
                    "fidelity_regularized" => {
                        let reg = states::regularized_entangled_state(n, &StateLabel::zero(Variant::PChi, n)?, x)?;
                        gaussian::overlap(&reg.gaussian, &p)?
                    }
                    "width_P" => states::orthogonality_width(&StateLabel::zero(Variant::PChi, n)?, 0, x)?,
                    _ => unreachable!("validated"),
                };
                out.insert(name.clone(), v);
            }
        }
        Param::T => {
            let g = dynamics::pfister_hamiltonian(n, spec.beta_chi)?;
            let rates = dynamics::heisenberg_rates(&g, &PumpSpec::new(spec.beta_chi, x)?)?;
            let evolved = gaussian::apply_map(&gaussian::vacuum(n)?, &gaussian::symplectic_of_generator(&g, x)?)?;
            for name in &spec.observables {
                let v = match name.as_str() {
                    "scale_sumP" => rates.total_p.factor,
                    "scale_relX" => rates.relative_x[0].factor,
                    "var_total_P" => gaussian::quad_variance(&evolved, &states::total_momentum(n))?,
                    "var_relative_X" => gaussian::quad_variance(&evolved, &states::relative_coordinate(n, 1))?,
                    _ => unreachable!("validated"),
                };
                out.insert(name.clone(), v);
            }
        }
    }
    Ok(out)
}

pub fn run(spec: &SweepSpec) -> CliResult<SweepTable> {
    spec.validate()?;
    let h = (spec.to - spec.from) / (spec.steps - 1) as f64;
    let rows = (0..spec.steps)
        .map(|i| {
            let x = if i + 1 == spec.steps { spec.to } else { spec.from + i as f64 * h };
            Ok(Row { param_value: x, observables: evaluate(spec, x)? })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SweepTable { parameter: spec.param.name().into(), columns: spec.observables.clone(), rows })
}

/// Least-squares slope of `ln y` against the parameter, or `None` if any
/// value is non-positive.
pub fn column_log_slope(table: &SweepTable, column: &str) -> Option<f64> {
    let x: Vec<f64> = table.rows.iter().map(|r| r.param_value).collect();
    let y: Vec<f64> = table.rows.iter().map(|r| r.observables.get(column).copied().unwrap_or(f64::NAN)).collect();
    log_slope(&x, &y)
}

pub fn to_csv(table: &SweepTable) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(std::iter::once(table.parameter.as_str()).chain(table.columns.iter().map(String::as_str)))?;
    for row in &table.rows {
        let mut rec = vec![fmt17(row.param_value)];
        rec.extend(table.columns.iter().map(|c| fmt17(row.observables[c])));
        w.write_record(&rec)?;
    }
    let mut text = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("CSV writer emits UTF-8");
    let slopes: Vec<String> = table
        .columns
        .iter()
        .map(|c| format!("{c}={}", column_log_slope(table, c).map_or_else(|| "nan".to_string(), fmt17)))
        .collect();
    text.push_str(&format!("# log_slope {}\n", slopes.join(",")));
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(param: Param, observables: &[&str]) -> SweepSpec {
        SweepSpec {
            param,
            from: 0.0,
            to: 1.0,
            steps: 21,
            observables: observables.iter().map(|s| s.to_string()).collect(),
            n: 2,
            beta_chi: 1.0,
        }
    }

    #[test]
    fn collective_variance_column() {
        let t = run(&spec(Param::Lambda, &["var_collective_X"])).unwrap();
        for r in &t.rows {
            assert!((r.observables["var_collective_X"] - (-2.0 * r.param_value).exp() / 4.0).abs() < 1e-12);
        }
        assert!((column_log_slope(&t, "var_collective_X").unwrap() + 2.0).abs() < 1e-10);
    }

    #[test]
    fn rows_ascend_and_end_on_the_bound() {
        let t = run(&spec(Param::T, &["scale_sumP"])).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].param_value < w[1].param_value));
        assert_eq!(t.rows.last().unwrap().param_value, 1.0);
    }

    #[test]
    fn invalid_requests_are_usage_errors() {
        assert_eq!(run(&spec(Param::T, &["var_collective_X"])).unwrap_err().code(), 2);
        let mut s = spec(Param::R, &["var_total_P"]);
        s.steps = 1;
        assert_eq!(run(&s).unwrap_err().code(), 2);
        s.steps = 3;
        s.to = -1.0;
        assert_eq!(run(&s).unwrap_err().code(), 2);
    }

    #[test]
    fn csv_has_header_rows_and_footer() {
        let mut s = spec(Param::Lambda, &["var_collective_X", "var_collective_Y"]);
        s.steps = 3;
        let text = to_csv(&run(&s).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,var_collective_X,var_collective_Y");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("# log_slope var_collective_X=-2.0"));
    }
}
