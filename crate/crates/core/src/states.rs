// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Entangled states labelled by total momentum and relative coordinates
//! (or total coordinate and relative momenta).
//!
//! Ideal states are unnormalizable; they are built as exact Fock
//! coefficients of `exp(y·a⁺ + ½ a⁺M a⁺)|vac⟩` and tested only through
//! homogeneous identities. Regularized states are pure Gaussians obtained by
//! running finitely squeezed factor states through the inverse entangling
//! operator, so their means carry the label exactly at every squeezing.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::algebra::{structure_matrix, StructureKind};
use crate::error::{arg, Error, Result};
use crate::fock::{self, FockOperator, FockSpace, FockVector};
use crate::gaussian::{self, FockAmplitudes, GaussianState, SymplecticMap};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Projected norms below this make residual ratios meaningless.
pub const DEGENERATE_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Eigenstate of `P = ΣPₖ` and `Qᵢ = X₁ − Xᵢ`.
    PChi,
    /// Eigenstate of `ΣXₖ` and `P₁ − Pᵢ`.
    ChiP,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateLabel {
    variant: Variant,
    scalar: f64,
    rest: Vec<f64>,
}

impl StateLabel {
    /// `scalar` is `p` (or `χ`), `rest` holds `χ₂…χₙ` (or `p₂…pₙ`).
    pub fn new(variant: Variant, scalar: f64, rest: Vec<f64>) -> Result<Self> {
        if rest.is_empty() {
            return arg("a label needs at least two modes");
        }
        if !scalar.is_finite() || rest.iter().any(|x| !x.is_finite()) {
            return arg("label entries must be finite");
        }
        Ok(Self { variant, scalar, rest })
    }

    pub fn zero(variant: Variant, n: usize) -> Result<Self> {
        if n < 2 {
            return arg("a label needs at least two modes");
        }
        Self::new(variant, 0.0, vec![0.0; n - 1])
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    pub fn rest(&self) -> &[f64] {
        &self.rest
    }

    pub fn n_modes(&self) -> usize {
        self.rest.len() + 1
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if self.n_modes() != n {
            return arg(format!("label has {} modes, expected {n}", self.n_modes()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementY {
    pub y: Vec<C64>,
}

pub fn displacement_y(label: &StateLabel, n: usize) -> Result<DisplacementY> {
    label.check_n(n)?;
    let nf = n as f64;
    let sum: f64 = label.rest.iter().sum();
    let y = match label.variant {
        Variant::PChi => {
            let y1 = C64::new(sum, label.scalar) * (SQRT_2 / nf);
            std::iter::once(y1).chain(label.rest.iter().map(|&c| y1 - SQRT_2 * c)).collect()
        }
        Variant::ChiP => {
            let y1 = C64::new(label.scalar, sum) * (SQRT_2 / nf);
            std::iter::once(y1).chain(label.rest.iter().map(|&p| y1 - C64::new(0.0, SQRT_2 * p))).collect()
        }
    };
    Ok(DisplacementY { y })
}

/// Recovers the label from a displacement vector.
pub fn label_from_y(variant: Variant, y: &DisplacementY) -> Result<StateLabel> {
    let n = y.y.len();
    if n < 2 {
        return arg("displacement needs at least two modes");
    }
    let y1 = y.y[0];
    let nf = n as f64;
    let (scalar, rest) = match variant {
        Variant::PChi => (y1.im * nf / SQRT_2, y.y[1..].iter().map(|&yi| (y1 - yi).re / SQRT_2).collect()),
        Variant::ChiP => (y1.re * nf / SQRT_2, y.y[1..].iter().map(|&yi| (y1 - yi).im / SQRT_2).collect()),
    };
    StateLabel::new(variant, scalar, rest)
}

/// Pair matrix of the ideal state: `2J/n − I` for `PChi`, its negative for
/// `ChiP`.
pub fn pair_matrix(variant: Variant, n: usize) -> Result<DMatrix<f64>> {
    let g = structure_matrix(StructureKind::G, n)?.entries().clone();
    Ok(match variant {
        Variant::PChi => -g,
        Variant::ChiP => g,
    })
}

/// Truncated ideal eigenstate with its normalization kept aside.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealState {
    /// Coefficients of `exp(−¼|y|² + y·a⁺ + ½ a⁺M a⁺)|vac⟩`.
    pub vector: FockVector,
    /// `1/(√n π^{n/4})`, the factor that fixes delta normalization.
    pub prefactor: f64,
    pub label: StateLabel,
}

fn raising_exponent(space: FockSpace, linear: &[C64], pair: &DMatrix<C64>) -> Result<FockOperator> {
    let lad = fock::ladders(space)?;
    let n = space.n_modes();
    let mut b = FockOperator::zeros(space);
    for i in 0..n {
        if linear[i] != ZERO {
            b = b.axpy(linear[i], &lad[i].1)?;
        }
        for j in 0..n {
            if pair[(i, j)] != ZERO {
                b = b.axpy(pair[(i, j)] * 0.5, &lad[i].1.mul(&lad[j].1)?)?;
            }
        }
    }
    Ok(b)
}

pub fn ideal_entangled_vector(space: FockSpace, label: &StateLabel) -> Result<IdealState> {
    let n = space.n_modes();
    let y = displacement_y(label, n)?.y;
    let m = pair_matrix(label.variant, n)?.map(|x| C64::new(x, 0.0));
    let b = raising_exponent(space, &y, &m)?;
    let weight: f64 = y.iter().map(|c| c.norm_sqr()).sum();
    let vector = fock::raising_exp_vacuum(&b)?.scale(C64::new((-0.25 * weight).exp(), 0.0));
    let nf = n as f64;
    let prefactor = 1.0 / (nf.sqrt() * PI.powf(nf / 4.0));
    Ok(IdealState { vector, prefactor, label: label.clone() })
}

/// Defining operators of a variant, each paired with its eigenvalue.
pub fn eigen_operators(space: FockSpace, label: &StateLabel) -> Result<Vec<(String, FockOperator, f64)>> {
    let n = space.n_modes();
    label.check_n(n)?;
    let q = fock::all_quadratures(space)?;
    let sum = |pick: fn(&(FockOperator, FockOperator)) -> &FockOperator| -> Result<FockOperator> {
        q[1..].iter().try_fold(pick(&q[0]).clone(), |acc, o| acc.add(pick(o)))
    };
    let mut out = Vec::with_capacity(n);
    match label.variant {
        Variant::PChi => {
            out.push(("P".to_string(), sum(|o| &o.1)?, label.scalar));
            for i in 1..n {
                out.push((format!("Q{}", i + 1), q[0].0.sub(&q[i].0)?, label.rest[i - 1]));
            }
        }
        Variant::ChiP => {
            out.push(("X".to_string(), sum(|o| &o.0)?, label.scalar));
            for i in 1..n {
                out.push((format!("P1-P{}", i + 1), q[0].1.sub(&q[i].1)?, label.rest[i - 1]));
            }
        }
    }
    Ok(out)
}

/// `‖Π(O − λ)v‖ / ‖Πv‖` for each defining operator, with `Π` the
/// projection to total photon number `d − 3`.
pub fn eigen_residual(v: &FockVector, label: &StateLabel) -> Result<Vec<(String, f64)>> {
    let space = v.space();
    let k = space.cutoff().checked_sub(3).ok_or_else(|| Error::Argument("cutoff too small".into()))?;
    let denom = v.project(k).norm();
    if denom < DEGENERATE_NORM {
        return Err(Error::Numeric(format!("projected vector norm {denom:e}: cutoff too small")));
    }
    eigen_operators(space, label)?
        .into_iter()
        .map(|(name, op, value)| {
            let r = op.apply(v)?.axpy(C64::new(-value, 0.0), v)?.project(k).norm();
            Ok((name, r / denom))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Coordinate,
    Momentum,
}

/// Ideal single-mode eigenstate on `mode`, other modes in vacuum:
/// `π^{−1/4} exp(−½x² + √2 x a⁺ − ½a⁺²)|0⟩` for a coordinate and
/// `π^{−1/4} exp(−½p² + i√2 p a⁺ + ½a⁺²)|0⟩` for a momentum.
pub fn factor_eigenstate(space: FockSpace, mode: usize, value: f64, kind: FactorKind) -> Result<FockVector> {
    space.check_mode(mode)?;
    let mut factors = vec![None; space.n_modes()];
    factors[mode] = Some((kind, value));
    product_eigenstate(space, &factors)
}

/// Product of ideal factor eigenstates; `None` leaves a mode in vacuum.
pub fn product_eigenstate(space: FockSpace, factors: &[Option<(FactorKind, f64)>]) -> Result<FockVector> {
    let n = space.n_modes();
    if factors.len() != n {
        return arg("one factor entry per mode is required");
    }
    let mut linear = vec![ZERO; n];
    let mut pair = DMatrix::from_element(n, n, ZERO);
    let mut scale = 1.0;
    for (k, f) in factors.iter().enumerate() {
        if let Some((kind, v)) = *f {
            if !v.is_finite() {
                return arg("factor value must be finite");
            }
            scale *= PI.powf(-0.25) * (-0.5 * v * v).exp();
            match kind {
                FactorKind::Coordinate => {
                    linear[k] = C64::new(SQRT_2 * v, 0.0);
                    pair[(k, k)] = C64::new(-1.0, 0.0);
                }
                FactorKind::Momentum => {
                    linear[k] = C64::new(0.0, SQRT_2 * v);
                    pair[(k, k)] = C64::new(1.0, 0.0);
                }
            }
        }
    }
    let b = raising_exponent(space, &linear, &pair)?;
    Ok(fock::raising_exp_vacuum(&b)?.scale(C64::new(scale, 0.0)))
}

/// Single-mode Gaussian stand-in for a factor eigenstate: mean `value` in
/// the chosen quadrature and variance `e^{−2r}/2` there.
pub fn regularized_factor(value: f64, kind: FactorKind, r: f64) -> Result<GaussianState> {
    if !(r >= 0.0) || !r.is_finite() {
        return arg(format!("squeezing must be finite and non-negative, got {r}"));
    }
    let (sq, anti) = ((-2.0 * r).exp() / 2.0, (2.0 * r).exp() / 2.0);
    let (mean, var) = match kind {
        FactorKind::Coordinate => ([value, 0.0], [sq, anti]),
        FactorKind::Momentum => ([0.0, value], [anti, sq]),
    };
    GaussianState::new(DVector::from_row_slice(&mean), DMatrix::from_diagonal(&DVector::from_row_slice(&var)))
}

/// Entangling unitary `exp(iX₁ Σₖ≥₂ Pₖ)` in both engines.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglingOperator {
    n: usize,
}

pub fn entangling_operator(n: usize) -> Result<EntanglingOperator> {
    if n < 2 {
        return arg("the entangling operator needs n >= 2");
    }
    Ok(EntanglingOperator { n })
}

impl EntanglingOperator {
    pub fn n_modes(&self) -> usize {
        self.n
    }

    /// Heisenberg map `U⁺rU`: `Xₖ → Xₖ − X₁`, `P₁ → P₁ + Σₖ≥₂ Pₖ`.
    pub fn heisenberg(&self) -> SymplecticMap {
        self.shear(-1.0)
    }

    /// Transport `U r U⁺`: `Xₖ → Xₖ + X₁`, `P₁ → P₁ − Σₖ≥₂ Pₖ`. This is also
    /// the Heisenberg map of `U⁻¹`, the operator that builds regularized
    /// states from factor states.
    pub fn transport(&self) -> SymplecticMap {
        self.shear(1.0)
    }

    fn shear(&self, s: f64) -> SymplecticMap {
        let n = self.n;
        let mut m = DMatrix::identity(2 * n, 2 * n);
        for k in 1..n {
            m[(k, 0)] = s;
            m[(n, n + k)] = -s;
        }
        SymplecticMap::new(m, DVector::zeros(2 * n)).expect("shear is symplectic")
    }

    /// Hermitian generator `X₁ Σₖ≥₂ Pₖ` on a truncated space.
    pub fn fock_generator(&self, space: FockSpace) -> Result<FockOperator> {
        if space.n_modes() != self.n {
            return arg("space mode count does not match");
        }
        let q = fock::all_quadratures(space)?;
        let mut g = FockOperator::zeros(space);
        for k in 1..self.n {
            g = g.add(&q[0].0.mul(&q[k].1)?)?;
        }
        Ok(g)
    }

    /// Dense `exp(iX₁ΣPₖ)` on a truncated space.
    pub fn fock(&self, space: FockSpace) -> Result<FockOperator> {
        fock::op_exp(&self.fock_generator(space)?.scale(C64::new(0.0, 1.0)))
    }
}

/// Outcome of comparing `U|p,χ⟩` with `e^{−ipΣχ/n}|p⟩₁⊗|−χ₂⟩₂⊗…`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    /// `|⟨L,R⟩| / (‖L‖‖R‖)` on the low block.
    pub normalized_overlap: f64,
    /// `⟨R,L⟩ / ⟨R,R⟩`.
    pub scalar: C64,
    pub expected: C64,
    pub modulus_error: f64,
    pub phase_error: f64,
    pub report_level: usize,
    pub working_cutoff: usize,
}

/// Default per-mode cutoff of the space on which `U⁺|m⟩` is evaluated.
pub const FACTORIZATION_WORKING_CUTOFF: usize = 50;

/// Checks the factorization of the entangling operator on the block of total
/// photon number at most `d − 3`.
///
/// The left side is never formed on the reporting space: each entry
/// `⟨m|U|ψ⟩` is computed as `⟨U⁺m|ψ⟩` on a much larger working space, where
/// `U⁺|m⟩` is still negligible at the edge. The right side is the product of
/// ideal factor states on the reporting space.
pub fn factorization_check(space: FockSpace, label: &StateLabel, working_cutoff: usize) -> Result<FactorizationReport> {
    if label.variant != Variant::PChi {
        return Err(Error::Unsupported("factorization is defined for the momentum-coordinate family".into()));
    }
    let n = space.n_modes();
    label.check_n(n)?;
    if working_cutoff < space.cutoff() {
        return arg("working cutoff must be at least the reporting cutoff");
    }
    let k = space.cutoff().checked_sub(3).ok_or_else(|| Error::Argument("cutoff too small".into()))?;
    let working = FockSpace::new(n, working_cutoff)?;
    let ideal = ideal_entangled_vector(working, label)?;
    let psi = ideal.vector.scale(C64::new(ideal.prefactor, 0.0));
    let e = entangling_operator(n)?;
    let minus_gen = e.fock_generator(working)?.scale(C64::new(0.0, -1.0));
    let mut lhs = vec![ZERO; space.dimension()];
    for j in space.low_states(k) {
        let m = FockVector::basis(space, j)?.transfer(working, false)?;
        let back = fock::expm_apply(&minus_gen, &m)?;
        lhs[j] = fock::inner(&back, &psi)?;
    }
    let lhs = FockVector::from_coeffs(space, lhs)?;

    let mut factors = vec![Some((FactorKind::Momentum, label.scalar))];
    factors.extend(label.rest.iter().map(|&c| Some((FactorKind::Coordinate, -c))));
    let rhs = product_eigenstate(space, &factors)?.project(k);

    let lr = fock::inner(&rhs, &lhs)?;
    let normalized_overlap = lr.norm() / (lhs.norm() * rhs.norm());
    let scalar = lr / rhs.norm().powi(2);
    let phase = -label.scalar / n as f64 * label.rest.iter().sum::<f64>();
    let expected = C64::from_polar(1.0, phase);
    Ok(FactorizationReport {
        normalized_overlap,
        scalar,
        expected,
        modulus_error: (scalar.norm() - 1.0).abs(),
        phase_error: (scalar / expected).arg().abs(),
        report_level: k,
        working_cutoff,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedState {
    pub gaussian: GaussianState,
    pub r: f64,
    pub label: StateLabel,
}

/// Gaussian stand-in for an entangled eigenstate at squeezing `r`.
///
/// `PChi`: a momentum factor at `p` on mode 1 and coordinate factors at
/// `−χₖ` on the others, followed by the inverse entangling operator.
/// `ChiP`: a coordinate factor at `χ` on mode 1 and momentum factors at
/// `−pₖ`, followed by the mirror shear `Pₖ → Pₖ + P₁`,
/// `X₁ → X₁ − Σₖ≥₂ Xₖ`.
pub fn regularized_entangled_state(n: usize, label: &StateLabel, r: f64) -> Result<RegularizedState> {
    label.check_n(n)?;
    let (first, others) = match label.variant {
        Variant::PChi => (FactorKind::Momentum, FactorKind::Coordinate),
        Variant::ChiP => (FactorKind::Coordinate, FactorKind::Momentum),
    };
    let mut state = regularized_factor(label.scalar, first, r)?;
    for &v in &label.rest {
        state = state.tensor(&regularized_factor(-v, others, r)?);
    }
    let map = match label.variant {
        Variant::PChi => entangling_operator(n)?.transport(),
        Variant::ChiP => mirror_shear(n),
    };
    let gaussian = gaussian::apply_map(&state, &map)?;
    Ok(RegularizedState { gaussian, r, label: label.clone() })
}

fn mirror_shear(n: usize) -> SymplecticMap {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for k in 1..n {
        m[(n + k, n)] = 1.0;
        m[(0, k)] = -1.0;
    }
    SymplecticMap::new(m, DVector::zeros(2 * n)).expect("shear is symplectic")
}

/// Two-mode squeezed vacuum with correlations `Var(X₁−X₂) = Var(P₁+P₂) =
/// e^{−2r}`, displaced to carry a `PChi` label. This is the `tanh r`
/// scaling of the ideal pair matrix and serves only as a cross-check.
pub fn tanh_regularized_state(label: &StateLabel, r: f64) -> Result<GaussianState> {
    label.check_n(2)?;
    if label.variant != Variant::PChi {
        return Err(Error::Unsupported("tanh regularization is provided for the momentum-coordinate family".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return arg("squeezing must be finite and non-negative");
    }
    let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c, s, 0.0, 0.0,
        s, c, 0.0, 0.0,
        0.0, 0.0, c, -s,
        0.0, 0.0, -s, c,
    ]);
    let chi = label.rest[0];
    let p = label.scalar;
    GaussianState::new(DVector::from_row_slice(&[chi / 2.0, -chi / 2.0, p / 2.0, p / 2.0]), cov)
}

/// Direction of `P = ΣPₖ`.
pub fn total_momentum(n: usize) -> DVector<f64> {
    DVector::from_fn(2 * n, |i, _| if i >= n { 1.0 } else { 0.0 })
}

/// Direction of `ΣXₖ`.
pub fn total_coordinate(n: usize) -> DVector<f64> {
    DVector::from_fn(2 * n, |i, _| if i < n { 1.0 } else { 0.0 })
}

/// Direction of `Qᵢ = X₁ − Xᵢ` (0-based `i ≥ 1`).
pub fn relative_coordinate(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(2 * n);
    v[0] = 1.0;
    v[i] = -1.0;
    v
}

/// Direction of `P₁ − Pᵢ` (0-based `i ≥ 1`).
pub fn relative_momentum(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(2 * n);
    v[n] = 1.0;
    v[n + i] = -1.0;
    v
}

/// Label-difference width of the regularized overlap.
///
/// Returns the shift `Δ` of one label component at which the fidelity with
/// the unshifted state has dropped to `e^{−1/2}`, found by bisection. For a
/// Gaussian profile `exp(−Δ²/(2w²))` this is `w`.
pub fn orthogonality_width(label: &StateLabel, component: usize, r: f64) -> Result<f64> {
    let n = label.n_modes();
    if component >= n {
        return arg(format!("component {component} out of range"));
    }
    let base = regularized_entangled_state(n, label, r)?;
    let fid = |delta: f64| -> Result<f64> {
        let mut shifted = label.clone();
        if component == 0 {
            shifted.scalar += delta;
        } else {
            shifted.rest[component - 1] += delta;
        }
        gaussian::overlap(&base.gaussian, &regularized_entangled_state(n, &shifted, r)?.gaussian)
    };
    let target = (-0.5f64).exp();
    let mut hi = 1.0;
    while fid(hi)? > target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Numeric("overlap does not decay".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fid(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub r: f64,
    pub half_width: f64,
    pub step: f64,
    pub cutoff: usize,
    /// Label-space measure the integral is divided by, `(2√π e^{−r})^n`.
    pub measure: f64,
    /// Basis states of the block, as occupation tuples.
    pub block_states: Vec<Vec<usize>>,
    /// Integrated operator on the block.
    pub block: DMatrix<C64>,
    /// `max |block − I|`.
    pub deviation: f64,
    /// Smallest and second-largest eigenvalue of the integrand block at the
    /// grid centre; a rank-one positive block has both at zero.
    pub integrand_min_eigenvalue: f64,
    pub integrand_second_eigenvalue: f64,
    pub warnings: Vec<String>,
}

/// Block size per mode of the reported completeness block.
pub const COMPLETENESS_BLOCK_LEVELS: usize = 2;

/// Integrates `|ψ⟩⟨ψ|` of regularized two-mode states over the label grid
/// `[−L, L]²` with step `h` and compares the block of states with every mode
/// in `{|0⟩, |1⟩}` against the identity.
pub fn completeness_quadrature_check(
    variant: Variant,
    r: f64,
    cutoff: usize,
    half_width: f64,
    step: f64,
) -> Result<CompletenessReport> {
    let n = 2;
    if !(half_width > 0.0) || !(step > 0.0) || step > half_width {
        return arg("grid needs 0 < step <= half width");
    }
    if cutoff < COMPLETENESS_BLOCK_LEVELS {
        return arg("cutoff smaller than the reported block");
    }
    let space = FockSpace::new(n, cutoff)?;
    let mut warnings = Vec::new();
    let peak = (-r).exp();
    if step > 0.5 * peak {
        warnings.push(format!("grid step {step} is coarse relative to the peak width {peak:.4}"));
    }
    if half_width < 3.0 {
        warnings.push(format!("grid half width {half_width} truncates the label integral"));
    }
    let block_states: Vec<Vec<usize>> =
        (0..COMPLETENESS_BLOCK_LEVELS).flat_map(|a| (0..COMPLETENESS_BLOCK_LEVELS).map(move |b| vec![a, b])).collect();
    let idx: Vec<usize> = block_states.iter().map(|o| space.index(o)).collect::<Result<_>>()?;
    let zero = StateLabel::zero(variant, n)?;
    let base = regularized_entangled_state(n, &zero, r)?.gaussian;
    let amps = FockAmplitudes::new(base.cov())?;
    let steps = (half_width / step).round() as i64;
    let mut acc = DMatrix::from_element(idx.len(), idx.len(), ZERO);
    let mut centre = None;
    for a in -steps..=steps {
        for b in -steps..=steps {
            let label = StateLabel::new(variant, a as f64 * step, vec![b as f64 * step])?;
            let mean = regularized_entangled_state(n, &label, r)?.gaussian.mean().clone();
            let v = amps.vector(space, &mean)?;
            let c = DVector::from_iterator(idx.len(), idx.iter().map(|&i| v.coeffs()[i]));
            let outer = &c * c.adjoint();
            if a == 0 && b == 0 {
                centre = Some(outer.clone());
            }
            acc += outer;
        }
    }
    let measure = (2.0 * PI.sqrt() * peak).powi(n as i32);
    let block = acc * C64::new(step * step / measure, 0.0);
    let deviation = (&block - DMatrix::identity(idx.len(), idx.len())).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let centre = centre.expect("grid contains the origin");
    let mut ev: Vec<f64> = SymmetricEigen::new(centre).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(CompletenessReport {
        r,
        half_width,
        step,
        cutoff,
        measure,
        block_states,
        block,
        deviation,
        integrand_min_eigenvalue: *ev.last().unwrap_or(&0.0),
        integrand_second_eigenvalue: ev.get(1).copied().unwrap_or(0.0),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displacement_examples() {
        let l = StateLabel::new(Variant::PChi, 0.0, vec![SQRT_2]).unwrap();
        let y = displacement_y(&l, 2).unwrap().y;
        assert!((y[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((y[1] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        let l = StateLabel::new(Variant::ChiP, 1.0, vec![0.0, 0.0]).unwrap();
        let y = displacement_y(&l, 3).unwrap().y;
        assert!(y.iter().all(|v| (v - C64::new(SQRT_2 / 3.0, 0.0)).norm() < 1e-15));
        assert!(displacement_y(&l, 2).is_err());
    }

    #[test]
    fn ideal_two_mode_pattern() {
        let s = FockSpace::new(2, 6).unwrap();
        let v = ideal_entangled_vector(s, &StateLabel::zero(Variant::PChi, 2).unwrap()).unwrap().vector;
        let c00 = v.get(&[0, 0]).unwrap();
        assert_eq!(v.get(&[1, 0]).unwrap(), ZERO);
        assert!((v.get(&[1, 1]).unwrap() / c00 - 1.0).norm() < 1e-15);
        assert!((v.get(&[3, 3]).unwrap() / c00 - 1.0).norm() < 1e-14);
    }

    #[test]
    fn ideal_three_mode_ratios() {
        let s = FockSpace::new(3, 4).unwrap();
        let v = ideal_entangled_vector(s, &StateLabel::zero(Variant::PChi, 3).unwrap()).unwrap().vector;
        let c0 = v.get(&[0, 0, 0]).unwrap();
        assert!((v.get(&[1, 1, 0]).unwrap() / c0 - 2.0 / 3.0).norm() < 1e-15);
        assert!((v.get(&[2, 0, 0]).unwrap() / c0 + SQRT_2 / 6.0).norm() < 1e-15);
    }

    #[test]
    fn coordinate_eigenstate_series() {
        let s = FockSpace::new(1, 8).unwrap();
        let v = factor_eigenstate(s, 0, 0.0, FactorKind::Coordinate).unwrap();
        assert!(v.coeffs().iter().skip(1).step_by(2).all(|c| *c == ZERO));
        assert!((v.coeffs()[2] / v.coeffs()[0] + 1.0 / SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn regularized_factor_at_zero_squeezing_is_coherent() {
        let g = regularized_factor(0.7, FactorKind::Coordinate, 0.0).unwrap();
        assert_eq!(g.cov(), &(DMatrix::identity(2, 2) * 0.5));
        assert_eq!(g.mean()[0], 0.7);
    }

    #[test]
    fn entangling_maps_are_mutual_inverses() {
        let e = entangling_operator(3).unwrap();
        let id = e.heisenberg().then(&e.transport()).unwrap();
        assert_eq!(id.s(), &DMatrix::identity(6, 6));
        assert!(entangling_operator(1).is_err());
    }

    #[test]
    fn label_means_are_exact() {
        let l = StateLabel::new(Variant::PChi, 0.3, vec![-1.2, 0.5]).unwrap();
        let s = regularized_entangled_state(3, &l, 1.7).unwrap().gaussian;
        assert_eq!(s.mean().dot(&total_momentum(3)), 0.3);
        assert_eq!(s.mean().dot(&relative_coordinate(3, 1)), -1.2);
        assert_eq!(s.mean().dot(&relative_coordinate(3, 2)), 0.5);
        let l = StateLabel::new(Variant::ChiP, 0.3, vec![-1.2, 0.5]).unwrap();
        let s = regularized_entangled_state(3, &l, 1.7).unwrap().gaussian;
        assert!((s.mean().dot(&total_coordinate(3)) - 0.3).abs() < 1e-15);
        assert_eq!(s.mean().dot(&relative_momentum(3, 1)), -1.2);
    }

    #[test]
    fn tanh_variant_matches_pair_series() {
        let r = 0.6;
        let g = tanh_regularized_state(&StateLabel::zero(Variant::PChi, 2).unwrap(), r).unwrap();
        let v = gaussian::fock_amplitudes(&g, FockSpace::new(2, 10).unwrap()).unwrap();
        for k in 0..6 {
            let expect = r.tanh().powi(k as i32) / r.cosh();
            assert!((v.get(&[k, k]).unwrap() - expect).norm() < 1e-13);
        }
        assert_eq!(v.get(&[1, 0]).unwrap().norm(), 0.0);
    }
}
