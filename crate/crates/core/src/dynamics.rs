// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Beam-splitter networks, the squeeze family `Sₙ`, collective quadratures
//! and the down-conversion Hamiltonians with their Heisenberg rates.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::algebra::{structure_matrix, su11_generators, Realization, StructureKind};
use crate::error::{arg, Error, Result};
use crate::fock::{self, FockOperator, FockSpace, FockVector};
use crate::gaussian::{self, GaussianState, LadderQuadratic, QuadraticGenerator, SymplecticMap};
use crate::linalg::symplectic_form;
use crate::states::{relative_coordinate, relative_momentum, total_coordinate, total_momentum, FactorKind};

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    i: usize,
    j: usize,
    theta: f64,
}

impl BeamSplitterSpec {
    /// Splitter on 0-based modes `i ≠ j` with `θ ∈ [0, 2π]`.
    pub fn new(i: usize, j: usize, theta: f64) -> Result<Self> {
        if i == j {
            return arg("beam splitter needs two distinct modes");
        }
        if !(0.0..=2.0 * PI).contains(&theta) {
            return arg(format!("angle {theta} outside [0, 2pi]"));
        }
        Ok(Self { i, j, theta })
    }

    pub fn modes(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `aᵢ → aᵢ cos θ + aⱼ sin θ`, `aⱼ → aᵢ sin θ − aⱼ cos θ`, acting identically
/// on the `X` and `P` blocks. The 2×2 block is a reflection, so this map is
/// its own inverse.
pub fn beam_splitter_map(spec: &BeamSplitterSpec, n: usize) -> Result<SymplecticMap> {
    if spec.i >= n || spec.j >= n {
        return arg(format!("beam splitter modes {:?} out of range for {n} modes", spec.modes()));
    }
    let (c, s) = (spec.theta.cos(), spec.theta.sin());
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for off in [0, n] {
        let (i, j) = (spec.i + off, spec.j + off);
        m[(i, i)] = c;
        m[(i, j)] = s;
        m[(j, i)] = s;
        m[(j, j)] = -c;
    }
    SymplecticMap::new(m, DVector::zeros(2 * n))
}

/// Fock-engine splitter `exp(iπ b⁺b)` with `b = sin(θ/2) aᵢ − cos(θ/2) aⱼ`,
/// the mode the reflection flips.
pub fn beam_splitter_fock(spec: &BeamSplitterSpec, space: FockSpace) -> Result<FockOperator> {
    space.check_mode(spec.i)?;
    space.check_mode(spec.j)?;
    let lad = fock::ladders(space)?;
    let v = [(spec.i, (spec.theta / 2.0).sin()), (spec.j, -(spec.theta / 2.0).cos())];
    let mut nb = FockOperator::zeros(space);
    for &(a, va) in &v {
        for &(b, vb) in &v {
            nb = nb.axpy(C64::new(va * vb, 0.0), &lad[a].1.mul(&lad[b].0)?)?;
        }
    }
    fock::op_exp(&nb.scale(C64::new(0.0, PI)))
}

/// Splitter sequence of the network, in the order the factors act.
pub fn vlb_factors(n: usize) -> Result<Vec<BeamSplitterSpec>> {
    if n < 2 {
        return arg("the network needs n >= 2");
    }
    (0..n - 1).map(|k| BeamSplitterSpec::new(k, k + 1, (1.0 / ((n - k) as f64).sqrt()).acos())).collect()
}

/// `B₍ₙ₋₁,ₙ₎(π/4) ⋯ B₍₁₂₎(cos⁻¹ 1/√n)`, rightmost factor first.
pub fn vlb_network(n: usize) -> Result<SymplecticMap> {
    let mut map = SymplecticMap::identity(n);
    for spec in vlb_factors(n)? {
        map = map.then(&beam_splitter_map(&spec, n)?)?;
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EprVariant {
    /// Momentum-squeezed mode 1, coordinate-squeezed modes 2…n.
    PChiZero,
    /// Coordinate-squeezed mode 1, momentum-squeezed modes 2…n.
    ChiPZero,
}

/// Network output for squeezed-vacuum inputs at squeezing `r`.
pub fn generate_epr(n: usize, r: f64, variant: EprVariant) -> Result<GaussianState> {
    let (first, others) = match variant {
        EprVariant::PChiZero => (FactorKind::Momentum, FactorKind::Coordinate),
        EprVariant::ChiPZero => (FactorKind::Coordinate, FactorKind::Momentum),
    };
    let net = vlb_network(n)?;
    let mut s = crate::states::regularized_factor(0.0, first, r)?;
    for _ in 1..n {
        s = s.tensor(&crate::states::regularized_factor(0.0, others, r)?);
    }
    gaussian::apply_map(&s, &net)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeParams {
    lambdas: Vec<f64>,
}

impl SqueezeParams {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 {
            return arg("squeeze parameters need at least two modes");
        }
        if lambdas.iter().any(|x| !x.is_finite()) {
            return arg("squeeze parameters must be finite");
        }
        Ok(Self { lambdas })
    }

    /// `λ₁ = … = λₙ = λ`.
    pub fn uniform(n: usize, lambda: f64) -> Result<Self> {
        Self::new(vec![lambda; n])
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { lambdas: self.lambdas.iter().map(|x| x * s).collect() }
    }
}

fn sym_outer(a: &DVector<f64>, b: &DVector<f64>) -> DMatrix<f64> {
    a * b.transpose() + b * a.transpose()
}

/// `nPₖ − P` (0-based `k ≥ 1`).
fn weighted_momentum(n: usize, k: usize) -> DVector<f64> {
    let mut v = -total_momentum(n);
    v[n + k] += n as f64;
    v
}

/// Unit-strength generator pieces: `−(1/n) sym(P ΣX)` and
/// `−(1/n) sym(Qₖ(nPₖ − P))` for `k = 2…n`, so that
/// `Sₙ = exp(−i Σ λⱼ Hⱼ)`.
pub fn squeeze_pieces(n: usize) -> Result<Vec<QuadraticGenerator>> {
    if n < 2 {
        return arg("squeeze pieces need n >= 2");
    }
    let nf = n as f64;
    let mut out = vec![QuadraticGenerator::new(
        sym_outer(&total_momentum(n), &total_coordinate(n)) * (-1.0 / nf),
        DVector::zeros(2 * n),
        "P.sumX",
    )?];
    for k in 1..n {
        out.push(QuadraticGenerator::new(
            sym_outer(&relative_coordinate(n, k), &weighted_momentum(n, k)) * (-1.0 / nf),
            DVector::zeros(2 * n),
            format!("Q{}.(nP{}-P)", k + 1, k + 1),
        )?);
    }
    Ok(out)
}

/// Quadratic generator `H` with `Sₙ = exp(−iH)`.
///
/// Writing each product in the exponent as its symmetrized part plus half
/// its commutator produces the c-number `+½λⱼ`, which cancels the
/// `−½Σλⱼ` term exactly.
pub fn squeeze_sn_generator(params: &SqueezeParams) -> Result<QuadraticGenerator> {
    let n = params.n_modes();
    let mut g = QuadraticGenerator::zero(n, "Sn");
    for (piece, &l) in squeeze_pieces(n)?.iter().zip(&params.lambdas) {
        g = g.add(&piece.scale(l))?;
    }
    Ok(g)
}

/// Heisenberg map of `Sₙ`.
pub fn squeeze_sn(params: &SqueezeParams) -> Result<SymplecticMap> {
    gaussian::symplectic_of_generator(&squeeze_sn_generator(params)?, 1.0)
}

/// Exponent of `Sₙ` on a truncated space, with every product ordered as
/// written: `(i/n)[λ₁ P·ΣXₖ + Σ λₖ Qₖ·(nPₖ − P)] − ½Σλₖ`.
pub fn squeeze_sn_exponent(space: FockSpace, params: &SqueezeParams) -> Result<FockOperator> {
    let n = params.n_modes();
    if space.n_modes() != n {
        return arg("space mode count does not match the squeeze parameters");
    }
    let q = fock::all_quadratures(space)?;
    let sum_x = q[1..].iter().try_fold(q[0].0.clone(), |acc, o| acc.add(&o.0))?;
    let sum_p = q[1..].iter().try_fold(q[0].1.clone(), |acc, o| acc.add(&o.1))?;
    let nf = n as f64;
    let lam = &params.lambdas;
    let mut inner = sum_p.mul(&sum_x)?.scale(C64::new(lam[0], 0.0));
    for k in 1..n {
        if lam[k] == 0.0 {
            continue;
        }
        let qk = q[0].0.sub(&q[k].0)?;
        let wk = q[k].1.scale(C64::new(nf, 0.0)).sub(&sum_p)?;
        inner = inner.axpy(C64::new(lam[k], 0.0), &qk.mul(&wk)?)?;
    }
    let total: f64 = lam.iter().sum();
    inner.scale(C64::new(0.0, 1.0 / nf)).axpy(C64::new(-0.5 * total, 0.0), &FockOperator::identity(space))
}

/// Literal exponent on a capped working space of total `cap`.
///
/// The products are formed two levels above the cap and then compressed to
/// it, so every retained entry is exact and the result stays
/// anti-Hermitian.
pub fn squeeze_sn_exponent_capped(n: usize, params: &SqueezeParams, cap: usize) -> Result<FockOperator> {
    let wide = squeeze_sn_exponent(FockSpace::capped(n, cap + 2)?, params)?.project(cap);
    let target = FockSpace::capped(n, cap)?;
    let cols = (0..target.dimension())
        .map(|j| {
            let occ = target.occupation(j);
            let wj = wide.space().index(&occ)?;
            wide.column(wj)
                .map(|(i, v)| Ok((target.index(&wide.space().occupation(i))?, v)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FockOperator::from_columns(target, cols))
}

/// Dense `Sₙ` on a truncated space.
pub fn squeeze_sn_fock(space: FockSpace, params: &SqueezeParams) -> Result<FockOperator> {
    fock::op_exp(&squeeze_sn_exponent(space, params)?)
}

/// Coefficients of a transformed linear observable plus its constant shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableImage {
    pub coeffs: DVector<f64>,
    pub shift: f64,
}

fn check_len(map: &SymplecticMap, c: &DVector<f64>) -> Result<()> {
    if c.len() != 2 * map.n_modes() {
        return arg(format!("observable of length {} for a {}-mode map", c.len(), map.n_modes()));
    }
    Ok(())
}

/// `U⁺(cᵀr)U = (Sᵀc)ᵀr + cᵀd`.
pub fn conjugate_observable(map: &SymplecticMap, c: &DVector<f64>) -> Result<ObservableImage> {
    check_len(map, c)?;
    Ok(ObservableImage { coeffs: map.s().transpose() * c, shift: c.dot(map.d()) })
}

/// `U(cᵀr)U⁺`, the conjugation by the inverse map.
pub fn transport_observable(map: &SymplecticMap, c: &DVector<f64>) -> Result<ObservableImage> {
    conjugate_observable(&map.inverse(), c)
}

/// Collective coordinate `ΣXₖ/√(2n)`.
pub fn collective_x(n: usize) -> DVector<f64> {
    total_coordinate(n) / (2.0 * n as f64).sqrt()
}

/// Collective momentum `ΣPₖ/√(2n)`.
pub fn collective_y(n: usize) -> DVector<f64> {
    total_momentum(n) / (2.0 * n as f64).sqrt()
}

/// `exp(−iH)` with `H = i μ (K₊ − K₋)` written as a quadratic generator,
/// i.e. the Gaussian form of `exp[μ(K₊ − K₋)]`.
pub fn su11_squeeze_generator(n: usize, realization: Realization, mu: f64) -> Result<QuadraticGenerator> {
    let m = structure_matrix(realization.kind(), n)?.entries().map(|x| C64::new(0.0, mu * x));
    let lq = LadderQuadratic::new(DMatrix::from_element(n, n, ZERO), m, DVector::from_element(n, ZERO), 0.0)?;
    Ok(lq.to_generator(format!("su11-{realization}"))?.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedVacuumStats {
    pub n: usize,
    pub lambda: f64,
    pub var_x: f64,
    pub var_y: f64,
    /// `ΔXΔY`.
    pub uncertainty: f64,
    pub var_total_x: f64,
    pub var_relative_p: Vec<f64>,
    /// Norm of `sech^{n/2}λ exp(K₊ tanh λ)|vac⟩` on the requested cutoff.
    pub fock_norm: Option<f64>,
}

/// Statistics of the uniformly squeezed vacuum `Sₙ(λ·1)|vac⟩`.
pub fn squeezed_vacuum_stats(n: usize, lambda: f64, fock_cutoff: Option<usize>) -> Result<SqueezedVacuumStats> {
    let s = gaussian::apply_map(&gaussian::vacuum(n)?, &squeeze_sn(&SqueezeParams::uniform(n, lambda)?)?)?;
    let var_x = gaussian::quad_variance(&s, &collective_x(n))?;
    let var_y = gaussian::quad_variance(&s, &collective_y(n))?;
    let var_relative_p = (1..n).map(|k| gaussian::quad_variance(&s, &relative_momentum(n, k))).collect::<Result<_>>()?;
    let fock_norm = match fock_cutoff {
        Some(d) => Some(closed_form_squeezed_vacuum(FockSpace::new(n, d)?, lambda)?.norm()),
        None => None,
    };
    Ok(SqueezedVacuumStats {
        n,
        lambda,
        var_x,
        var_y,
        uncertainty: (var_x * var_y).sqrt(),
        var_total_x: gaussian::quad_variance(&s, &total_coordinate(n))?,
        var_relative_p,
        fock_norm,
    })
}

/// `sech^{n/2}λ exp(K₊ tanh λ)|vac⟩` with the `G` realization.
pub fn closed_form_squeezed_vacuum(space: FockSpace, lambda: f64) -> Result<FockVector> {
    let k = su11_generators(space, Realization::G)?;
    let v = fock::raising_exp_vacuum(&k.k_plus.scale(C64::new(lambda.tanh(), 0.0)))?;
    Ok(v.scale(C64::new(lambda.cosh().powf(-(space.n_modes() as f64) / 2.0), 0.0)))
}

/// `H_I = −(i/2) ṙ₁ a⁺G′a⁺ + (i/2) ṙ₂ a⁺G″a⁺ + h.c.` in quadrature form.
pub fn hamiltonian_hi(n: usize, rate1: f64, rate2: f64) -> Result<QuadraticGenerator> {
    if !rate1.is_finite() || !rate2.is_finite() {
        return arg("rates must be finite");
    }
    let gp = structure_matrix(StructureKind::Gp, n)?;
    let gpp = structure_matrix(StructureKind::Gpp, n)?;
    let d = (gp.entries() * -rate1 + gpp.entries() * rate2).map(|x| C64::new(0.0, x));
    let lq = LadderQuadratic::new(DMatrix::from_element(n, n, ZERO), d, DVector::from_element(n, ZERO), 0.0)?;
    Ok(lq.to_generator("H_I")?.0)
}

/// `iβχ Σᵢ<ⱼ aᵢ⁺aⱼ⁺ + h.c.` in quadrature form.
pub fn pfister_hamiltonian(n: usize, beta_chi: f64) -> Result<QuadraticGenerator> {
    if n < 2 {
        return arg("the pairwise Hamiltonian needs n >= 2");
    }
    if !beta_chi.is_finite() {
        return arg("coupling must be finite");
    }
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { ZERO } else { C64::new(0.0, beta_chi) });
    let lq = LadderQuadratic::new(DMatrix::from_element(n, n, ZERO), d, DVector::from_element(n, ZERO), 0.0)?;
    Ok(lq.to_generator("pairwise")?.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpec {
    pub beta_chi: f64,
    pub t: f64,
}

impl PumpSpec {
    pub fn new(beta_chi: f64, t: f64) -> Result<Self> {
        if !beta_chi.is_finite() || !t.is_finite() || t < 0.0 {
            return arg("pump needs finite coupling and t >= 0");
        }
        Ok(Self { beta_chi, t })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionRate {
    pub name: String,
    /// `e^{κt}` when the direction is an eigendirection, otherwise the
    /// Rayleigh quotient of the image.
    pub factor: f64,
    pub rate: Option<f64>,
    pub eigen: bool,
    pub image: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub t: f64,
    pub total_p: DirectionRate,
    pub relative_x: Vec<DirectionRate>,
    /// `e^{−(n−1)βχt}` and `e^{−βχt}`.
    pub expected_total_p: f64,
    pub expected_relative_x: f64,
}

fn direction_rate(g: &QuadraticGenerator, name: String, c: &DVector<f64>, t: f64) -> Result<DirectionRate> {
    let flow_t = g.flow().transpose();
    let image = &flow_t * c;
    let kappa = image.dot(c) / c.dot(c);
    let eigen = (&image - c * kappa).amax() <= 1e-12 * (1.0 + image.amax());
    let map = gaussian::symplectic_of_generator(g, t)?;
    let conj = conjugate_observable(&map, c)?.coeffs;
    let (factor, rate) = if eigen { ((kappa * t).exp(), Some(kappa)) } else { (conj.dot(c) / c.dot(c), None) };
    Ok(DirectionRate { name, factor, rate, eigen, image: conj })
}

/// Heisenberg scale factors of `ΣPᵢ` and each `X₁ − Xⱼ` at time `t`.
pub fn heisenberg_rates(g: &QuadraticGenerator, pump: &PumpSpec) -> Result<RateReport> {
    let n = g.n_modes();
    if n < 2 {
        return arg("rates need n >= 2");
    }
    let total_p = direction_rate(g, "sumP".into(), &total_momentum(n), pump.t)?;
    let relative_x = (1..n)
        .map(|k| direction_rate(g, format!("X1-X{}", k + 1), &relative_coordinate(n, k), pump.t))
        .collect::<Result<_>>()?;
    let bt = pump.beta_chi * pump.t;
    Ok(RateReport {
        t: pump.t,
        total_p,
        relative_x,
        expected_total_p: (-(n as f64 - 1.0) * bt).exp(),
        expected_relative_x: (-bt).exp(),
    })
}

/// Eigenvalues of the flow matrix `ΩA`, sorted by real part. Complex pairs
/// are reported by their real parts.
pub fn flow_eigenvalues(g: &QuadraticGenerator) -> Vec<f64> {
    let mut ev: Vec<f64> = g.flow().complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// `AΩB − BΩA`; zero exactly when the two quadratic forms commute.
pub fn poisson_commutator(a: &QuadraticGenerator, b: &QuadraticGenerator) -> Result<DMatrix<f64>> {
    if a.n_modes() != b.n_modes() {
        return arg("generators on different mode counts");
    }
    let omega = symplectic_form(a.n_modes());
    Ok(a.a() * &omega * b.a() - b.a() * &omega * a.a())
}

/// Low block of `U O U⁺` for `U = exp(E)` with `E` anti-Hermitian.
///
/// Both exponentials act on a capped working space of total `cap`, so the
/// reported block is free of truncation effects; `o` is built on the same
/// working space by the caller.
pub fn fock_conjugated_block(
    report: FockSpace,
    k: usize,
    cap: usize,
    exponent: impl Fn(FockSpace) -> Result<FockOperator>,
    o: impl Fn(FockSpace) -> Result<FockOperator>,
) -> Result<FockOperator> {
    let working = FockSpace::capped(report.n_modes(), cap)?;
    let e = exponent(working)?;
    let e_inv = e.scale(C64::new(-1.0, 0.0));
    let op = o(working)?;
    fock::restricted_action(report, working, k, |v| {
        let w = fock::expm_apply(&e_inv, v)?;
        fock::expm_apply(&e, &op.apply(&w)?)
    })
}

/// Fock-engine scale factors of `P, Q₂, …, Qₙ` under `Sₙ O Sₙ⁻¹`, each as
/// the best-fit multiple `⟨O, SOS⁻¹⟩_F / ⟨O, O⟩_F` on the block of total
/// photon number `k`, together with the relative residual of that fit.
pub fn fock_squeeze_scales(report: FockSpace, params: &SqueezeParams, k: usize, cap: usize) -> Result<Vec<(f64, f64)>> {
    let n = params.n_modes();
    let mut out = Vec::with_capacity(n);
    for idx in 0..n {
        let obs = |space: FockSpace| -> Result<FockOperator> {
            let q = fock::all_quadratures(space)?;
            if idx == 0 {
                q[1..].iter().try_fold(q[0].1.clone(), |acc, o| acc.add(&o.1))
            } else {
                q[0].0.sub(&q[idx].0)
            }
        };
        let conj = fock_conjugated_block(report, k, cap, |w| squeeze_sn_exponent_capped(n, params, w.max_total()), obs)?;
        let plain = obs(report)?.project(k);
        let num: C64 = (0..report.dimension()).flat_map(|j| conj.column(j).map(move |(i, v)| (i, j, v))).map(|(i, j, v)| plain.get(i, j).conj() * v).sum();
        let den = plain.frobenius_norm().powi(2);
        let scale = num.re / den;
        let resid = conj.sub(&plain.scale(C64::new(scale, 0.0)))?.frobenius_norm() / plain.frobenius_norm();
        out.push((scale, resid));
    }
    Ok(out)
}

/// `max |⟨Sₙi|Sₙj⟩ − δᵢⱼ|` over basis states of total photon number at most
/// `k`, with `Sₙ` built from the literal exponent on a working space capped
/// at total `cap`.
pub fn fock_squeeze_gram_defect(n: usize, params: &SqueezeParams, k: usize, cap: usize) -> Result<f64> {
    if params.n_modes() != n {
        return arg("mode count does not match the squeeze parameters");
    }
    let e = squeeze_sn_exponent_capped(n, params, cap.max(k))?;
    let working = e.space();
    let low = working.low_states(k);
    let cols = low
        .iter()
        .map(|&j| fock::expm_apply(&e, &FockVector::basis(working, j)?))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (a, u) in cols.iter().enumerate() {
        for (b, v) in cols.iter().enumerate().skip(a) {
            let delta = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((fock::inner(u, v)? - delta).norm());
        }
    }
    Ok(worst)
}

/// Largest Frobenius norm of `[Hᵢ, Hⱼ]` over the squeeze pieces, as Fock
/// matrices projected to total photon number `k`.
pub fn fock_piece_commutators(space: FockSpace, k: usize) -> Result<f64> {
    let ops = squeeze_pieces(space.n_modes())?
        .iter()
        .map(|p| p.fock_operator(space))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            worst = worst.max(fock::commutator(a, b)?.project(k).frobenius_norm());
        }
    }
    Ok(worst)
}

/// First and second moments of `exp(−iHt)|vac⟩` in both engines.
///
/// Returns the Gaussian-engine state and the Fock-engine mean and
/// covariance computed on `space`.
pub fn evolve_vacuum_both(
    g: &QuadraticGenerator,
    t: f64,
    space: FockSpace,
) -> Result<(GaussianState, DVector<f64>, DMatrix<f64>)> {
    let n = g.n_modes();
    let gs = gaussian::apply_map(&gaussian::vacuum(n)?, &gaussian::symplectic_of_generator(g, t)?)?;
    let h = g.fock_operator(space)?.scale(C64::new(0.0, -t));
    let v = fock::expm_apply(&h, &FockVector::vacuum(space))?;
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-3 {
        return Err(Error::Range(format!("evolved state lost norm {:.3e} to truncation", 1.0 - norm)));
    }
    let (mean, cov) = gaussian::fock_moments(&v)?;
    Ok((gs, mean, cov))
}

/// Largest entry of `|SΩSᵀ − Ω|` over a set of maps.
pub fn max_symplectic_error(maps: &[SymplecticMap]) -> f64 {
    maps.iter().map(|m| m.symplectic_error()).fold(0.0, f64::max)
}
