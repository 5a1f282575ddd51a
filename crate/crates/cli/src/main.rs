// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! `mesq`: verification suites, parameter sweeps and state dumps.
//!
//! Exit status is 0 on success, 1 when a check fails or a computation
//! breaks down, and 2 for usage errors and envelope violations.

mod config;
mod error;
mod output;
mod state;
mod sweep;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::Config;
use error::{usage, CliError, CliResult};
use sweep::{Param, SweepSpec};
use verify::Suite;

#[derive(Parser)]
#[command(name = "mesq", version, about = "Multimode entangled states and squeezing: checks, sweeps and dumps")]
struct Cli {
    /// `key=value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Evaluate observables on a parameter grid and write CSV.
    Sweep(SweepArgs),
    /// Sweep over time under the pairwise down-conversion Hamiltonian.
    Evolve(SweepArgs),
    /// Dump an ideal or regularized state as JSON.
    State(StateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// matrices, su11, bch, eigen, entangle, squeeze, hamiltonian, completeness or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cutoff: Option<usize>,
    /// Overrides the default tolerance of every residual check.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the ChaCha8 generator used by randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// lambda, r or t.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated observable names; defaults to all for the parameter.
    #[arg(long)]
    observables: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Coupling for the `t` sweep.
    #[arg(long = "beta-chi", allow_hyphen_values = true)]
    beta_chi: Option<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated label values, scalar first.
    #[arg(long, allow_hyphen_values = true)]
    label: Option<String>,
    /// pchi or chip.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    cutoff: Option<usize>,
    /// Squeezing parameter; selects the regularized Gaussian dump.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn cmd_verify(a: VerifyArgs, cfg: &Config) -> CliResult<bool> {
    let suite: Suite = match cfg.pick(a.suite, "suite")? {
        Some(s) => s.parse().map_err(CliError::Usage)?,
        None => return usage("--suite is required"),
    };
    let params = verify::Params {
        n: cfg.pick(a.n, "n")?.unwrap_or(2),
        cutoff: cfg.pick(a.cutoff, "cutoff")?,
        tol: cfg.pick(a.tol, "tol")?,
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(0),
    };
    let json: Option<PathBuf> = cfg.pick(a.json, "json")?;
    let start = Instant::now();
    let mut report = verify::run(suite, &params)?;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    output::emit(json.as_deref(), &output::to_json(&report)?)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {} > {}", c.name, output::fmt17(c.value), output::fmt17(c.tolerance));
    }
    Ok(report.passed())
}

fn cmd_sweep(a: SweepArgs, cfg: &Config, forced: Option<Param>) -> CliResult<bool> {
    let given: Option<String> = cfg.pick(a.param, "param")?;
    let param = match (forced, given) {
        (Some(p), None) => p,
        (Some(p), Some(g)) if g == p.name() => p,
        (Some(_), Some(g)) => return usage(format!("evolve sweeps t, not {g}")),
        (None, Some(g)) => g.parse().map_err(CliError::Usage)?,
        (None, None) => return usage("--param is required"),
    };
    let observables = match cfg.pick::<String>(a.observables, "observables")? {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => param.observables().iter().map(|s| s.to_string()).collect(),
    };
    let spec = SweepSpec {
        param,
        from: cfg.pick(a.from, "from")?.unwrap_or(0.0),
        to: cfg.pick(a.to, "to")?.unwrap_or(1.0),
        steps: cfg.pick(a.steps, "steps")?.unwrap_or(11),
        observables,
        n: cfg.pick(a.n, "n")?.unwrap_or(2),
        beta_chi: cfg.pick(a.beta_chi, "beta-chi")?.unwrap_or(1.0),
    };
    let csv_path: Option<PathBuf> = cfg.pick(a.csv, "csv")?;
    let table = sweep::run(&spec)?;
    output::emit(csv_path.as_deref(), &sweep::to_csv(&table)?)?;
    Ok(true)
}

fn cmd_state(a: StateArgs, cfg: &Config) -> CliResult<bool> {
    let format: String = cfg.pick(a.format, "format")?.unwrap_or_else(|| "json".into());
    if format != "json" {
        return usage(format!("unsupported format '{format}'"));
    }
    let n = cfg.pick(a.n, "n")?.unwrap_or(2);
    if n < 2 {
        return usage("n must be at least 2");
    }
    let variant = state::parse_variant(&cfg.pick(a.variant, "variant")?.unwrap_or_else(|| "pchi".into()))?;
    let label = state::parse_label(variant, n, &cfg.pick(a.label, "label")?.unwrap_or_default())?;
    let cutoff = cfg.pick(a.cutoff, "cutoff")?.unwrap_or(4);
    let json: Option<PathBuf> = cfg.pick(a.json, "json")?;
    let d = state::dump(n, &label, cutoff, cfg.pick(a.r, "r")?)?;
    output::emit(json.as_deref(), &output::to_json(&d)?)?;
    Ok(true)
}

fn run(cli: Cli) -> CliResult<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| match e {
            CliError::Failure(m) => CliError::Usage(format!("cannot read config {}: {m}", p.display())),
            other => other,
        })?,
        None => Config::default(),
    };
    match cli.command {
        Command::Verify(a) => cmd_verify(a, &cfg),
        Command::Sweep(a) => cmd_sweep(a, &cfg, None),
        Command::Evolve(a) => cmd_sweep(a, &cfg, Some(Param::T)),
        Command::State(a) => cmd_state(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mesq: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
