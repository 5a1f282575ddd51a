// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Verification suites and their JSON report.

use std::str::FromStr;

use mesq::algebra::{
    closure_residuals, direct_squeeze, factored_squeeze, structure_matrix, su11_generators, DisentangleOptions,
    LoweringSign, Realization, StructureKind,
};
use mesq::dynamics::{self, SqueezeParams};
use mesq::fock::FockSpace;
use mesq::gaussian::{self, QuadraticGenerator};
use mesq::linalg::{max_abs, symplectic_form};
use mesq::states::{self, StateLabel, Variant};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, CliResult};

pub const MAX_GAUSSIAN_MODES: usize = 8;
pub const MAX_FOCK_MODES: usize = 4;
pub const MAX_FOCK_DIMENSION: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Matrices,
    Su11,
    Bch,
    Eigen,
    Entangle,
    Squeeze,
    Hamiltonian,
    Completeness,
    All,
}

impl Suite {
    const RUN_ORDER: [Suite; 8] = [
        Self::Matrices,
        Self::Su11,
        Self::Bch,
        Self::Eigen,
        Self::Entangle,
        Self::Squeeze,
        Self::Hamiltonian,
        Self::Completeness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Matrices => "matrices",
            Self::Su11 => "su11",
            Self::Bch => "bch",
            Self::Eigen => "eigen",
            Self::Entangle => "entangle",
            Self::Squeeze => "squeeze",
            Self::Hamiltonian => "hamiltonian",
            Self::Completeness => "completeness",
            Self::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::RUN_ORDER
            .into_iter()
            .chain([Self::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub n: usize,
    pub cutoff: usize,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub n: usize,
    pub cutoff: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
}

struct Collector<'a> {
    params: &'a Params,
    prefix: String,
    checks: Vec<Check>,
    findings: Vec<String>,
}

impl Collector<'_> {
    /// Residual check whose tolerance `--tol` may override.
    fn residual(&mut self, name: impl AsRef<str>, value: f64, tol: f64, provenance: &str) {
        let tol = self.params.tol.unwrap_or(tol);
        self.bound(name, value, tol, provenance);
    }

    /// Check with a fixed bound.
    fn bound(&mut self, name: impl AsRef<str>, value: f64, tolerance: f64, provenance: &str) {
        self.checks.push(Check {
            name: format!("{}{}", self.prefix, name.as_ref()),
            value,
            tolerance,
            pass: value <= tolerance,
            provenance: provenance.into(),
        });
    }

    fn finding(&mut self, text: String) {
        self.findings.push(format!("{}{}", self.prefix, text));
    }
}

fn gaussian_envelope(n: usize) -> CliResult<()> {
    if !(2..=MAX_GAUSSIAN_MODES).contains(&n) {
        return usage(format!("n must be in 2..={MAX_GAUSSIAN_MODES}, got {n}"));
    }
    Ok(())
}

fn fock_envelope(n: usize, d: usize) -> CliResult<()> {
    if !(2..=MAX_FOCK_MODES).contains(&n) {
        return usage(format!("Fock suites need n in 2..={MAX_FOCK_MODES}, got {n}"));
    }
    let dim = (d as f64).powi(n as i32);
    if dim > MAX_FOCK_DIMENSION as f64 {
        return usage(format!("cutoff {d} with {n} modes exceeds the {MAX_FOCK_DIMENSION}-state envelope"));
    }
    Ok(())
}

fn min_cutoff(d: usize, min: usize, suite: &str) -> CliResult<()> {
    if d < min {
        return usage(format!("suite {suite} needs cutoff >= {min}, got {d}"));
    }
    Ok(())
}

fn matrices(c: &mut Collector) -> CliResult<()> {
    let n = c.params.n;
    gaussian_envelope(n)?;
    let f = structure_matrix(StructureKind::F, n)?;
    let fi = structure_matrix(StructureKind::Finv, n)?;
    c.residual("F*Finv-I", max_abs(&(f.entries() * fi.entries() - DMatrix::identity(n - 1, n - 1))), 1e-12, "structure-inverse");
    let g = structure_matrix(StructureKind::G, n)?.entries().clone();
    let gp = structure_matrix(StructureKind::Gp, n)?.entries().clone();
    let gpp = structure_matrix(StructureKind::Gpp, n)?.entries().clone();
    let id = DMatrix::identity(n, n);
    let tag = "projector-identities";
    c.residual("G^2-I", max_abs(&(&g * &g - &id)), 1e-14, tag);
    c.residual("Gp^2-Gp", max_abs(&(&gp * &gp - &gp)), 1e-14, tag);
    c.residual("Gpp^2-Gpp", max_abs(&(&gpp * &gpp - &gpp)), 1e-14, tag);
    c.residual("Gp*Gpp", max_abs(&(&gp * &gpp)), 1e-14, tag);
    c.residual("G-(I-2Gp)", max_abs(&(&g - (&id - &gp * 2.0))), 1e-14, tag);
    let mut ev: Vec<f64> = g.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    let spec = (ev[0] + 1.0).abs().max(ev[1..].iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max));
    c.residual("G-spectrum", spec, 1e-12, "involution-spectrum");
    Ok(())
}

fn su11(c: &mut Collector) -> CliResult<()> {
    let (n, d) = (c.params.n, c.params.cutoff.unwrap_or(12));
    fock_envelope(n, d)?;
    min_cutoff(d, 6, "su11")?;
    let space = FockSpace::new(n, d)?;
    let names = ["[K-,K+]-2K0", "[K0,K+]-K+", "[K0,K-]+K-"];
    for r in Realization::ALL {
        let res = closure_residuals(&su11_generators(space, r)?, d - 4)?;
        for (name, v) in names.iter().zip(res) {
            c.residual(format!("{r}:{name}"), v, 1e-10, "su11-closure");
        }
    }
    Ok(())
}

fn bch(c: &mut Collector) -> CliResult<()> {
    let (n, d) = (c.params.n, c.params.cutoff.unwrap_or(16));
    fock_envelope(n, d)?;
    min_cutoff(d, 8, "bch")?;
    let space = FockSpace::new(n, d)?;
    let opts = DisentangleOptions::for_cutoff(d);
    let lambda = 0.3;
    for (r, sign) in [(Realization::G, 1), (Realization::Gp, -1), (Realization::Gpp, 1)] {
        let direct = direct_squeeze(space, r, lambda, sign, opts)?;
        let factored = factored_squeeze(space, r, lambda, sign, opts)?;
        c.residual(format!("{r}:direct-factored"), direct.sub(&factored)?.frobenius_norm(), 1e-8, "disentangling");
        if r == Realization::Gpp {
            let flipped =
                factored_squeeze(space, r, lambda, sign, DisentangleOptions { lowering: LoweringSign::Flipped, ..opts })?;
            let e = direct.sub(&flipped)?.frobenius_norm();
            c.finding(format!(
                "Gpp lowering factor: exp(-K''_- tanh) matches the direct form; exp(+K''_- tanh) differs by {e:.6e}"
            ));
        }
    }
    Ok(())
}

fn random_label(rng: &mut ChaCha8Rng, variant: Variant, n: usize) -> CliResult<StateLabel> {
    let scalar = rng.random_range(-1.5..1.5);
    let rest = (1..n).map(|_| rng.random_range(-1.5..1.5)).collect();
    Ok(StateLabel::new(variant, scalar, rest)?)
}

fn eigen(c: &mut Collector) -> CliResult<()> {
    let n = c.params.n;
    let d = c.params.cutoff.unwrap_or(match n {
        2 => 14,
        3 => 10,
        _ => 8,
    });
    fock_envelope(n, d)?;
    min_cutoff(d, 5, "eigen")?;
    let space = FockSpace::new(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.params.seed);
    for i in 0..20 {
        let variant = if i % 2 == 0 { Variant::PChi } else { Variant::ChiP };
        let label = random_label(&mut rng, variant, n)?;
        let v = states::ideal_entangled_vector(space, &label)?;
        let worst = states::eigen_residual(&v.vector, &label)?.into_iter().map(|(_, r)| r).fold(0.0, f64::max);
        c.residual(format!("label{i:02}:{variant:?}"), worst, 1e-10, "eigen-equation");
    }
    Ok(())
}

fn entangle(c: &mut Collector) -> CliResult<()> {
    let d = c.params.cutoff.unwrap_or(14);
    fock_envelope(2, d)?;
    min_cutoff(d, 6, "entangle")?;
    let label = StateLabel::new(Variant::PChi, 1.0, vec![0.5])?;
    let rep = states::factorization_check(FockSpace::new(2, d)?, &label, states::FACTORIZATION_WORKING_CUTOFF.max(d))?;
    c.residual("1-overlap", 1.0 - rep.normalized_overlap, 1e-8, "entangling-factorization");
    c.residual("scalar-phase", (rep.scalar - rep.expected).norm(), 1e-8, "entangling-factorization");
    Ok(())
}

/// `λ₁ = 0.7`, then `0.4, 0.2, 0.1, …`.
fn default_lambdas(n: usize) -> Vec<f64> {
    (0..n).map(|k| if k == 0 { 0.7 } else { 0.4 * 0.5f64.powi(k as i32 - 1) }).collect()
}

fn squeeze(c: &mut Collector) -> CliResult<()> {
    let n = c.params.n;
    gaussian_envelope(n)?;
    let params = SqueezeParams::new(default_lambdas(n))?;
    let map = dynamics::squeeze_sn(&params)?;
    for (k, l) in params.lambdas().iter().enumerate() {
        let dir = if k == 0 { states::total_momentum(n) } else { states::relative_coordinate(n, k) };
        let img = dynamics::transport_observable(&map, &dir)?.coeffs;
        let name = if k == 0 { "scale:P".to_string() } else { format!("scale:Q{}", k + 1) };
        c.residual(name, (img - dir * (-l).exp()).amax(), 1e-12, "squeeze-conjugation");
    }
    let back = map.then(&dynamics::squeeze_sn(&params.scaled(-1.0))?)?;
    c.residual("S(l)S(-l)-I", max_abs(&(back.s() - DMatrix::identity(2 * n, 2 * n))), 1e-10, "squeeze-inverse");
    let uni = dynamics::squeeze_sn(&SqueezeParams::uniform(n, 0.5)?)?;
    let su = gaussian::symplectic_of_generator(&dynamics::su11_squeeze_generator(n, Realization::G, 0.5)?, 1.0)?;
    c.residual("uniform-vs-su11", max_abs(&(uni.s() - su.s())), 1e-10, "uniform-squeeze");
    let pieces = dynamics::squeeze_pieces(n)?;
    let mut comm = 0.0f64;
    for a in &pieces {
        for b in &pieces {
            comm = comm.max(max_abs(&dynamics::poisson_commutator(a, b)?));
        }
    }
    c.residual("pieces-commute", comm, 1e-12, "squeeze-commutativity");
    let x = dynamics::conjugate_observable(&uni, &dynamics::collective_x(n))?.coeffs;
    let y = dynamics::conjugate_observable(&uni, &dynamics::collective_y(n))?.coeffs;
    c.residual("collective-X", (x - dynamics::collective_x(n) * (-0.5f64).exp()).amax(), 1e-12, "collective-scaling");
    c.residual("collective-Y", (y - dynamics::collective_y(n) * 0.5f64.exp()).amax(), 1e-12, "collective-scaling");
    let s = dynamics::squeezed_vacuum_stats(n, 0.5, None)?;
    c.residual("var-X", (s.var_x - (-1.0f64).exp() / 4.0).abs(), 1e-12, "squeezed-vacuum");
    c.residual("var-Y", (s.var_y - 1.0f64.exp() / 4.0).abs(), 1e-12, "squeezed-vacuum");

    if n <= 3 {
        let d = c.params.cutoff.unwrap_or(10);
        fock_envelope(n, d)?;
        min_cutoff(d, 8, "squeeze")?;
        let space = FockSpace::new(n, d)?;
        let half = params.scaled(0.5);
        let scales = dynamics::fock_squeeze_scales(space, &half, d - 4, 3 * d + 2)?;
        let err = scales.iter().zip(half.lambdas()).map(|((s, _), l)| (s - (-l).exp()).abs()).fold(0.0, f64::max);
        c.residual("fock-scale", err, 1e-6, "squeeze-conjugation");
        let e = dynamics::squeeze_sn_exponent(space, &half)?;
        c.residual("exponent-anti-hermitian", e.add(&e.adjoint())?.project(d - 2).max_abs(), 1e-12, "squeeze-exponent");
        c.residual("fock-unitarity", dynamics::fock_squeeze_gram_defect(n, &half, d - 6, 2 * d + 4)?, 1e-8, "squeeze-unitarity");
        c.residual("fock-pieces-commute", dynamics::fock_piece_commutators(space, d - 5)?, 1e-10, "squeeze-commutativity");
        let norm = dynamics::squeezed_vacuum_stats(n, 0.4, Some(20))?.fock_norm.unwrap_or(f64::NAN);
        c.residual("closed-form-norm", (norm - 1.0).abs(), 1e-6, "squeezed-vacuum");
    }
    Ok(())
}

fn seeded_generator(rng: &mut ChaCha8Rng, n: usize) -> CliResult<QuadraticGenerator> {
    let m = 2 * n;
    let a = DMatrix::<f64>::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
    let a = (&a + a.transpose()) * 0.5;
    let b = DVector::<f64>::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    let norm = (a.norm_squared() + b.norm_squared()).sqrt();
    Ok(QuadraticGenerator::new(a / norm, b / norm, "seeded")?)
}

fn hamiltonian(c: &mut Collector) -> CliResult<()> {
    let n = c.params.n;
    gaussian_envelope(n)?;
    let nf = n as f64;
    for bc in [0.5, 1.0] {
        let g = dynamics::pfister_hamiltonian(n, bc)?;
        let hi = dynamics::hamiltonian_hi(n, -(nf - 1.0) * bc, -bc)?;
        c.residual(format!("bc={bc}:HI-vs-pairwise"), max_abs(&(hi.a() - g.a())), 1e-12, "hamiltonian-equivalence");
        let a = g.a();
        c.residual(format!("bc={bc}:hermitian"), max_abs(&(a - a.transpose())), 1e-15, "hamiltonian-equivalence");
        for t in [0.5, 1.0, 2.0] {
            let r = dynamics::heisenberg_rates(&g, &dynamics::PumpSpec::new(bc, t)?)?;
            let mut err = (r.total_p.factor - r.expected_total_p).abs();
            for x in &r.relative_x {
                err = err.max((x.factor - r.expected_relative_x).abs());
            }
            let eigen = r.total_p.eigen && r.relative_x.iter().all(|x| x.eigen);
            c.residual(format!("bc={bc},t={t}:rates"), if eigen { err } else { f64::MAX }, 1e-10, "pairwise-rates");
        }
        let ev = dynamics::flow_eigenvalues(&g);
        let mut expect: Vec<f64> =
            [-(nf - 1.0) * bc, (nf - 1.0) * bc].into_iter().chain((1..n).flat_map(|_| [-bc, bc])).collect();
        expect.sort_by(|a, b| a.total_cmp(b));
        let err = ev.iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        c.residual(format!("bc={bc}:flow-spectrum"), err, 1e-12, "pairwise-rates");
    }
    let map = gaussian::symplectic_of_generator(&dynamics::pfister_hamiltonian(n, 1.0)?, 1.0)?;
    c.residual("flow-symplectic", map.symplectic_error(), 1e-10, "gaussian-flow");
    let omega = symplectic_form(n);
    c.residual("form-antisymmetric", max_abs(&(&omega + omega.transpose())), 0.0, "gaussian-flow");
    if n == 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(c.params.seed);
        let space = FockSpace::new(2, 20)?;
        for i in 0..5 {
            let g = seeded_generator(&mut rng, 2)?;
            let (gs, mean, cov) = dynamics::evolve_vacuum_both(&g, 1.0, space)?;
            let err = (gs.mean() - mean).amax().max(max_abs(&(gs.cov() - cov)));
            c.residual(format!("engines{i}"), err, 1e-6, "cross-engine");
        }
    }
    Ok(())
}

fn completeness(c: &mut Collector) -> CliResult<()> {
    let d = c.params.cutoff.unwrap_or(8);
    fock_envelope(2, d)?;
    let mut devs = Vec::new();
    for r in [1.0, 1.5, 2.0] {
        let rep = states::completeness_quadrature_check(Variant::PChi, r, d, 6.0, 0.05)?;
        c.finding(format!("r={r}: block deviation {:.6e}", rep.deviation));
        for w in rep.warnings {
            c.finding(format!("r={r}: {w}"));
        }
        devs.push(rep.deviation);
    }
    c.bound("deviation-r2", devs[2], 0.05, "completeness");
    let rise = devs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    c.bound("monotone-in-r", rise, 0.0, "completeness");
    Ok(())
}

fn run_one(suite: Suite, c: &mut Collector) -> CliResult<()> {
    match suite {
        Suite::Matrices => matrices(c),
        Suite::Su11 => su11(c),
        Suite::Bch => bch(c),
        Suite::Eigen => eigen(c),
        Suite::Entangle => entangle(c),
        Suite::Squeeze => squeeze(c),
        Suite::Hamiltonian => hamiltonian(c),
        Suite::Completeness => completeness(c),
        Suite::All => unreachable!("expanded by the caller"),
    }
}

/// Runs a suite. `wall_time_ms` is left at zero for the caller to fill.
pub fn run(suite: Suite, params: &Params) -> CliResult<VerificationReport> {
    if let Some(t) = params.tol {
        if !(t >= 0.0) || !t.is_finite() {
            return usage(format!("tolerance must be finite and non-negative, got {t}"));
        }
    }
    if suite == Suite::Entangle || suite == Suite::Completeness {
        if params.n != 2 {
            return usage(format!("suite {} is defined for n = 2", suite.name()));
        }
    }
    let mut c = Collector { params, prefix: String::new(), checks: Vec::new(), findings: Vec::new() };
    if suite == Suite::All {
        for s in Suite::RUN_ORDER {
            if params.n != 2 && matches!(s, Suite::Entangle | Suite::Completeness) {
                continue;
            }
            c.prefix = format!("{}/", s.name());
            run_one(s, &mut c)?;
        }
    } else {
        run_one(suite, &mut c)?;
    }
    Ok(VerificationReport {
        schema: crate::output::SCHEMA.into(),
        suite: suite.name().into(),
        n: params.n,
        cutoff: params.cutoff.unwrap_or(match suite {
            Suite::Su11 => 12,
            Suite::Bch => 16,
            Suite::Eigen if params.n == 2 => 14,
            Suite::Eigen if params.n == 3 => 10,
            Suite::Eigen => 8,
            Suite::Entangle => 14,
            Suite::Squeeze if params.n <= 3 => 10,
            Suite::Completeness => 8,
            _ => 0,
        }),
        checks: c.checks,
        findings: c.findings,
        seed: params.seed,
        wall_time_ms: 0,
    })
}
