// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian-state engine.
//!
//! States are first and second moments in the ordering `(X₁…Xₙ, P₁…Pₙ)`,
//! with the vacuum at covariance `I/2`. Unitaries act through
//! [`SymplecticMap`]s, which record the Heisenberg picture: a map `(S, d)`
//! stands for `U⁺ r U = S r + d`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{arg, Error, Result};
use crate::fock::{self, FockOperator, FockSpace, FockVector};
use crate::linalg::{self, symplectic_form};

const SYM_TOL: f64 = 1e-12;
const UNCERTAINTY_TOL: f64 = -1e-10;
const SYMPLECTIC_TOL: f64 = 1e-10;
/// Tolerance on `det(2σ) = 1` for a pure state.
pub const PURITY_TOL: f64 = 1e-8;

fn check_finite(v: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    if v.into_iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric(format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    linalg::max_abs(&(m - m.transpose()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry and the uncertainty relation `σ + iΩ/2 ≥ 0`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 || cov.nrows() != dim || cov.ncols() != dim {
            return arg(format!("mean of length {dim} with a {}x{} covariance", cov.nrows(), cov.ncols()));
        }
        check_finite(mean.iter().copied(), "mean")?;
        check_finite(cov.iter().copied(), "covariance")?;
        if asymmetry(&cov) > SYM_TOL {
            return arg("covariance is not symmetric");
        }
        let n = dim / 2;
        let omega = symplectic_form(n);
        let h = DMatrix::from_fn(dim, dim, |i, j| C64::new(cov[(i, j)], 0.5 * omega[(i, j)]));
        let min = SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < UNCERTAINTY_TOL {
            return arg(format!("covariance violates the uncertainty relation (eigenvalue {min:e})"));
        }
        Ok(Self { n, mean, cov })
    }

    pub fn n_modes(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `det(2σ)`, equal to 1 for pure states.
    pub fn purity_det(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }

    pub fn is_pure(&self) -> bool {
        (self.purity_det() - 1.0).abs() <= PURITY_TOL
    }

    /// Same covariance, new mean.
    pub fn with_mean(&self, mean: DVector<f64>) -> Result<Self> {
        if mean.len() != 2 * self.n {
            return arg("mean length does not match the mode count");
        }
        check_finite(mean.iter().copied(), "mean")?;
        Ok(Self { n: self.n, mean, cov: self.cov.clone() })
    }

    /// Tensor product `self ⊗ other`, modes of `self` first.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        let pos = |k: usize, left: bool| if left { if k < a { k } else { n + k - a } } else if k < b { a + k } else { n + a + k - b };
        let mut mean = DVector::zeros(2 * n);
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        for (src, left, m) in [(self, true, 2 * a), (other, false, 2 * b)] {
            for i in 0..m {
                mean[pos(i, left)] = src.mean[i];
                for j in 0..m {
                    cov[(pos(i, left), pos(j, left))] = src.cov[(i, j)];
                }
            }
        }
        GaussianState { n, mean, cov }
    }
}

pub fn vacuum(n: usize) -> Result<GaussianState> {
    if n < 1 {
        return arg("vacuum needs at least one mode");
    }
    Ok(GaussianState { n, mean: DVector::zeros(2 * n), cov: DMatrix::identity(2 * n, 2 * n) * 0.5 })
}

/// Heisenberg action `r → S r + d` of a Gaussian unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticMap {
    /// Checks `SΩSᵀ = Ω` to 1e−10.
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || dim % 2 != 0 || s.ncols() != dim || d.len() != dim {
            return arg(format!("map of size {}x{} with displacement of length {}", s.nrows(), s.ncols(), d.len()));
        }
        check_finite(s.iter().chain(d.iter()).copied(), "map")?;
        let m = Self { s, d };
        let err = m.symplectic_error();
        if err > SYMPLECTIC_TOL {
            return Err(Error::Numeric(format!("matrix is not symplectic (error {err:e})")));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        Self { s: DMatrix::identity(2 * n, 2 * n), d: DVector::zeros(2 * n) }
    }

    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn d(&self) -> &DVector<f64> {
        &self.d
    }

    /// `‖SΩSᵀ − Ω‖_max`.
    pub fn symplectic_error(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        linalg::max_abs(&(&self.s * &omega * self.s.transpose() - omega))
    }

    /// Map of `U_then · U_self`, i.e. `self` acts first.
    pub fn then(&self, then: &SymplecticMap) -> Result<Self> {
        if then.s.nrows() != self.s.nrows() {
            return arg("cannot compose maps on different mode counts");
        }
        Ok(Self { s: &then.s * &self.s, d: &then.s * &self.d + &then.d })
    }

    /// Map of `U⁻¹`.
    pub fn inverse(&self) -> Self {
        let omega = symplectic_form(self.n_modes());
        let s = -(&omega * self.s.transpose() * &omega);
        let d = -(&s * &self.d);
        Self { s, d }
    }
}

/// Hermitian quadratic Hamiltonian `H = ½ rᵀA r + bᵀr`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGenerator {
    a: DMatrix<f64>,
    b: DVector<f64>,
    label: String,
}

impl QuadraticGenerator {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, label: impl Into<String>) -> Result<Self> {
        let dim = a.nrows();
        if dim == 0 || dim % 2 != 0 || a.ncols() != dim || b.len() != dim {
            return arg(format!("generator of size {}x{} with linear part of length {}", a.nrows(), a.ncols(), b.len()));
        }
        check_finite(a.iter().chain(b.iter()).copied(), "generator")?;
        if asymmetry(&a) > SYM_TOL {
            return arg("generator matrix is not symmetric");
        }
        let a = (&a + a.transpose()) * 0.5;
        Ok(Self { a, b, label: label.into() })
    }

    pub fn zero(n: usize, label: impl Into<String>) -> Self {
        Self { a: DMatrix::zeros(2 * n, 2 * n), b: DVector::zeros(2 * n), label: label.into() }
    }

    pub fn n_modes(&self) -> usize {
        self.a.nrows() / 2
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Flow matrix `ΩA` of the Heisenberg equations `ṙ = ΩA r + Ωb`.
    pub fn flow(&self) -> DMatrix<f64> {
        symplectic_form(self.n_modes()) * &self.a
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { a: &self.a * s, b: &self.b * s, label: self.label.clone() }
    }

    pub fn add(&self, other: &QuadraticGenerator) -> Result<Self> {
        if self.a.nrows() != other.a.nrows() {
            return arg("cannot add generators on different mode counts");
        }
        Ok(Self { a: &self.a + &other.a, b: &self.b + &other.b, label: self.label.clone() })
    }

    /// Fock-engine operator of the same Hamiltonian, built from normal-ordered
    /// ladder products plus the exact c-number from reordering.
    pub fn fock_operator(&self, space: FockSpace) -> Result<FockOperator> {
        LadderQuadratic::from_generator(self).fock_operator(space)
    }
}

/// Heisenberg map of `exp(−iHt)`.
///
/// `S = exp(tΩA)`; the displacement is the top-right block of
/// `exp(t [[ΩA, Ωb], [0, 0]])`.
pub fn symplectic_of_generator(g: &QuadraticGenerator, t: f64) -> Result<SymplecticMap> {
    if !t.is_finite() {
        return Err(Error::Numeric("non-finite time".into()));
    }
    let dim = g.a.nrows();
    let omega = symplectic_form(g.n_modes());
    let mut aug = DMatrix::zeros(dim + 1, dim + 1);
    aug.view_mut((0, 0), (dim, dim)).copy_from(&(&omega * &g.a * t));
    aug.view_mut((0, dim), (dim, 1)).copy_from(&(&omega * &g.b * t));
    let e = linalg::expm(&aug)?;
    let s = e.view((0, 0), (dim, dim)).into_owned();
    let d = e.view((0, dim), (dim, 1)).column(0).into_owned();
    SymplecticMap::new(s, d)
}

pub fn apply_map(s: &GaussianState, m: &SymplecticMap) -> Result<GaussianState> {
    if m.s.nrows() != 2 * s.n {
        return arg(format!("map on {} modes applied to a {}-mode state", m.n_modes(), s.n));
    }
    let mean = &m.s * &s.mean + &m.d;
    let cov = &m.s * &s.cov * m.s.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianState { n: s.n, mean, cov })
}

fn check_direction(s: &GaussianState, c: &DVector<f64>) -> Result<()> {
    if c.len() != 2 * s.n {
        return arg(format!("direction of length {} for a {}-mode state", c.len(), s.n));
    }
    Ok(())
}

/// Variance `cᵀσc` of the observable `cᵀr`.
pub fn quad_variance(s: &GaussianState, c: &DVector<f64>) -> Result<f64> {
    check_direction(s, c)?;
    Ok((c.transpose() * &s.cov * c)[(0, 0)])
}

/// Mean `cᵀ⟨r⟩` of the observable `cᵀr`.
pub fn quad_mean(s: &GaussianState, c: &DVector<f64>) -> Result<f64> {
    check_direction(s, c)?;
    Ok(c.dot(&s.mean))
}

/// Fidelity `|⟨ψ₁|ψ₂⟩|²` of two pure Gaussian states.
pub fn overlap(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.n != s2.n {
        return arg("overlap of states with different mode counts");
    }
    for s in [s1, s2] {
        if !s.is_pure() {
            return Err(Error::Unsupported(format!("overlap needs pure states (det(2σ) = {})", s.purity_det())));
        }
    }
    let sum = &s1.cov + &s2.cov;
    let delta = &s1.mean - &s2.mean;
    let det = sum.determinant();
    let inv = sum.try_inverse().ok_or_else(|| Error::Numeric("singular covariance sum".into()))?;
    let q = (delta.transpose() * inv * &delta)[(0, 0)];
    Ok((-0.5 * q).exp() / det.sqrt())
}

/// `r = M α` with `α = (a, a⁺)`.
fn quadrature_from_ladder(n: usize) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::from_element(2 * n, 2 * n, C64::new(0.0, 0.0));
    for k in 0..n {
        m[(k, k)] = C64::new(s, 0.0);
        m[(k, n + k)] = C64::new(s, 0.0);
        m[(n + k, k)] = C64::new(0.0, -s);
        m[(n + k, n + k)] = C64::new(0.0, s);
    }
    m
}

/// `α = W r` with `α = (a, a⁺)`.
fn ladder_from_quadrature(n: usize) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut w = DMatrix::from_element(2 * n, 2 * n, C64::new(0.0, 0.0));
    for k in 0..n {
        w[(k, k)] = C64::new(s, 0.0);
        w[(k, n + k)] = C64::new(0.0, s);
        w[(n + k, k)] = C64::new(s, 0.0);
        w[(n + k, n + k)] = C64::new(0.0, -s);
    }
    w
}

/// A Hamiltonian written in ladder operators,
///
/// `H = Σ Cᵢⱼ aᵢ⁺aⱼ + ½ Σ Dᵢⱼ aᵢ⁺aⱼ⁺ + ½ Σ D*ᵢⱼ aᵢaⱼ + Σ (fᵢaᵢ⁺ + f*ᵢaᵢ) + h₀`,
///
/// with `C` Hermitian and `D` symmetric. Converts to and from the
/// quadrature form `½ rᵀA r + bᵀr + c`, where the constant `c = h₀ − ½ tr C`
/// comes from reordering `a aᵀ` into `a⁺a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderQuadratic {
    pub c: DMatrix<C64>,
    pub d: DMatrix<C64>,
    pub f: DVector<C64>,
    pub h0: f64,
}

impl LadderQuadratic {
    pub fn new(c: DMatrix<C64>, d: DMatrix<C64>, f: DVector<C64>, h0: f64) -> Result<Self> {
        let n = c.nrows();
        if n == 0 || c.ncols() != n || d.nrows() != n || d.ncols() != n || f.len() != n {
            return arg("ladder form blocks have inconsistent sizes");
        }
        if linalg::max_abs(&(&c - c.adjoint())) > SYM_TOL {
            return arg("number-conserving block is not Hermitian");
        }
        if linalg::max_abs(&(&d - d.transpose())) > SYM_TOL {
            return arg("pair-creation block is not symmetric");
        }
        Ok(Self { c, d, f, h0 })
    }

    pub fn n_modes(&self) -> usize {
        self.c.nrows()
    }

    /// Quadrature form and the constant it drops.
    pub fn to_generator(&self, label: impl Into<String>) -> Result<(QuadraticGenerator, f64)> {
        let n = self.n_modes();
        let mut k = DMatrix::from_element(2 * n, 2 * n, C64::new(0.0, 0.0));
        k.view_mut((0, 0), (n, n)).copy_from(&self.d.map(|z| z.conj()));
        k.view_mut((0, n), (n, n)).copy_from(&self.c.transpose());
        k.view_mut((n, 0), (n, n)).copy_from(&self.c);
        k.view_mut((n, n), (n, n)).copy_from(&self.d);
        let w = ladder_from_quadrature(n);
        let a = w.transpose() * k * &w;
        let imag = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if imag > 1e-12 * (1.0 + linalg::max_abs(&a)) {
            return Err(Error::Numeric(format!("quadrature form is not real (imaginary part {imag:e})")));
        }
        let s2 = std::f64::consts::SQRT_2;
        let mut b = DVector::zeros(2 * n);
        for i in 0..n {
            b[i] = s2 * self.f[i].re;
            b[n + i] = s2 * self.f[i].im;
        }
        let offset = self.h0 - 0.5 * self.c.trace().re;
        Ok((QuadraticGenerator::new(a.map(|z| z.re), b, label)?, offset))
    }

    /// Ladder form of `½ rᵀA r + bᵀr`.
    pub fn from_generator(g: &QuadraticGenerator) -> Self {
        let n = g.n_modes();
        let m = quadrature_from_ladder(n);
        let a = g.a.map(|x| C64::new(x, 0.0));
        let k = m.transpose() * a * &m;
        let c = k.view((n, 0), (n, n)).into_owned();
        let d = k.view((n, n), (n, n)).into_owned();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = DVector::from_fn(n, |i, _| C64::new(s * g.b[i], s * g.b[n + i]));
        let h0 = 0.5 * c.trace().re;
        Self { c, d, f, h0 }
    }

    /// Operator on a truncated space, assembled from normal-ordered ladder
    /// products so that every matrix element inside the box is exact.
    pub fn fock_operator(&self, space: FockSpace) -> Result<FockOperator> {
        let n = self.n_modes();
        if space.n_modes() != n {
            return arg(format!("{n}-mode Hamiltonian on a {}-mode space", space.n_modes()));
        }
        let lad = fock::ladders(space)?;
        let mut h = FockOperator::identity(space).scale(C64::new(self.h0, 0.0));
        for i in 0..n {
            for j in 0..n {
                if self.c[(i, j)] != C64::new(0.0, 0.0) {
                    h = h.axpy(self.c[(i, j)], &lad[i].1.mul(&lad[j].0)?)?;
                }
                if self.d[(i, j)] != C64::new(0.0, 0.0) {
                    let up = lad[i].1.mul(&lad[j].1)?;
                    let down = lad[i].0.mul(&lad[j].0)?;
                    h = h.axpy(self.d[(i, j)] * 0.5, &up)?;
                    h = h.axpy(self.d[(i, j)].conj() * 0.5, &down)?;
                }
            }
            h = h.axpy(self.f[i], &lad[i].1)?;
            h = h.axpy(self.f[i].conj(), &lad[i].0)?;
        }
        Ok(h)
    }
}

/// Means and symmetrized covariance `½⟨{Δrᵢ, Δrⱼ}⟩` of a normalized Fock
/// vector.
pub fn fock_moments(v: &FockVector) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let space = v.space();
    let n = space.n_modes();
    let q = fock::all_quadratures(space)?;
    let mut rv = Vec::with_capacity(2 * n);
    for k in 0..n {
        rv.push(q[k].0.apply(v)?);
    }
    for k in 0..n {
        rv.push(q[k].1.apply(v)?);
    }
    let mean = DVector::from_fn(2 * n, |i, _| fock::inner(v, &rv[i]).map(|z| z.re).unwrap_or(f64::NAN));
    let mut cov = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in i..2 * n {
            let z = fock::inner(&rv[i], &rv[j])?;
            let c = z.re - mean[i] * mean[j];
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    Ok((mean, cov))
}

/// Fock amplitudes of pure Gaussian states sharing one covariance matrix.
///
/// A pure state is `c₀ exp(½ a⁺B a⁺ + γ·a⁺)|vac⟩` up to a global phase. `B`
/// depends only on the covariance; `γ` and `|c₀|` depend on the mean, so
/// many means can share one setup.
#[derive(Debug, Clone)]
pub struct FockAmplitudes {
    n: usize,
    b: DMatrix<C64>,
    q_inv: DMatrix<C64>,
    sqrt_det_q: f64,
}

impl FockAmplitudes {
    pub fn new(cov: &DMatrix<f64>) -> Result<Self> {
        let dim = cov.nrows();
        if dim == 0 || dim % 2 != 0 || cov.ncols() != dim {
            return arg("covariance must be square with even size");
        }
        let n = dim / 2;
        let w = ladder_from_quadrature(n);
        let sigma = cov.map(|x| C64::new(x, 0.0));
        let q = &w * sigma * w.adjoint() + DMatrix::identity(dim, dim) * C64::new(0.5, 0.0);
        let det = q.determinant();
        let q_inv = q.try_inverse().ok_or_else(|| Error::Numeric("singular Husimi matrix".into()))?;
        let mut b = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = -q_inv[(n + i, j)].conj();
            }
        }
        Ok(Self { n, b, q_inv, sqrt_det_q: det.re.sqrt() })
    }

    /// Pair-creation matrix `B`.
    pub fn pair_matrix(&self) -> &DMatrix<C64> {
        &self.b
    }

    /// Vacuum amplitude magnitude and the linear coefficient `γ`.
    pub fn coefficients(&self, mean: &DVector<f64>) -> Result<(f64, DVector<C64>)> {
        let n = self.n;
        if mean.len() != 2 * n {
            return arg("mean length does not match the covariance");
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let alpha = DVector::from_fn(n, |i, _| C64::new(s * mean[i], s * mean[n + i]));
        let xi = DVector::from_fn(2 * n, |i, _| if i < n { alpha[i] } else { alpha[i - n].conj() });
        let quad = (xi.adjoint() * &self.q_inv * &xi)[(0, 0)].re;
        let c0 = ((-0.5 * quad).exp() / self.sqrt_det_q).sqrt();
        let gamma = &alpha - &self.b * alpha.map(|z| z.conj());
        Ok((c0, gamma))
    }

    /// Amplitudes on a truncated space. Each coefficient is exact; only the
    /// global phase is fixed by convention (vacuum amplitude real positive).
    pub fn vector(&self, space: FockSpace, mean: &DVector<f64>) -> Result<FockVector> {
        if space.n_modes() != self.n {
            return arg("space mode count does not match the state");
        }
        let (c0, gamma) = self.coefficients(mean)?;
        let lad = fock::ladders(space)?;
        let mut gen = FockOperator::zeros(space);
        for i in 0..self.n {
            gen = gen.axpy(gamma[i], &lad[i].1)?;
            for j in 0..self.n {
                if self.b[(i, j)].norm() > 0.0 {
                    gen = gen.axpy(self.b[(i, j)] * 0.5, &lad[i].1.mul(&lad[j].1)?)?;
                }
            }
        }
        Ok(fock::raising_exp_vacuum(&gen)?.scale(C64::new(c0, 0.0)))
    }
}

/// Fock amplitudes of a pure Gaussian state.
pub fn fock_amplitudes(s: &GaussianState, space: FockSpace) -> Result<FockVector> {
    if !s.is_pure() {
        return Err(Error::Unsupported("Fock amplitudes need a pure state".into()));
    }
    FockAmplitudes::new(&s.cov)?.vector(space, &s.mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, k: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[k] = 1.0;
        v
    }

    #[test]
    fn vacuum_moments() {
        let v = vacuum(1).unwrap();
        assert_eq!(v.cov(), &(DMatrix::identity(2, 2) * 0.5));
        assert!(vacuum(0).is_err());
        assert_eq!(quad_variance(&v, &e(2, 0)).unwrap(), 0.5);
        let v3 = vacuum(3).unwrap();
        let c = DVector::from_fn(6, |i, _| if i < 3 { 1.0 / 6f64.sqrt() } else { 0.0 });
        assert!((quad_variance(&v3, &c).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn state_validation() {
        let bad = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.1);
        assert!(bad.is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(GaussianState::new(DVector::zeros(2), asym).is_err());
    }

    #[test]
    fn zero_generator_gives_identity() {
        let m = symplectic_of_generator(&QuadraticGenerator::zero(2, "zero"), 1.3).unwrap();
        assert_eq!(m, SymplecticMap::identity(2));
    }

    #[test]
    fn shear_generator_from_hamilton_equations() {
        // H = X₁P₂: Ẋ₂ = X₁, Ṗ₁ = −P₂.
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 3)] = 1.0;
        a[(3, 0)] = 1.0;
        let g = QuadraticGenerator::new(a, DVector::zeros(4), "x1p2").unwrap();
        let m = symplectic_of_generator(&g, 1.0).unwrap();
        let mut expect = DMatrix::identity(4, 4);
        expect[(1, 0)] = 1.0;
        expect[(2, 3)] = -1.0;
        assert!(linalg::max_abs(&(m.s() - expect)) < 1e-15);
    }

    #[test]
    fn single_mode_squeezer() {
        let lam = 0.5;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -lam, -lam, 0.0]);
        let g = QuadraticGenerator::new(a, DVector::zeros(2), "sq").unwrap();
        let m = symplectic_of_generator(&g, 1.0).unwrap();
        assert!((m.s()[(0, 0)] - (-lam).exp()).abs() < 1e-15);
        assert!((m.s()[(1, 1)] - lam.exp()).abs() < 1e-15);
    }

    #[test]
    fn linear_term_displaces() {
        // H = −p₀X: the momentum grows linearly, P(t) = P + p₀t.
        let g = QuadraticGenerator::new(DMatrix::zeros(2, 2), DVector::from_vec(vec![-0.7, 0.0]), "kick").unwrap();
        let m = symplectic_of_generator(&g, 2.0).unwrap();
        assert!((m.d()[1] - 1.4).abs() < 1e-15);
        assert_eq!(m.d()[0], 0.0);
    }

    #[test]
    fn composition_and_inverse() {
        let a = DMatrix::from_fn(4, 4, |i, j| ((i + 2 * j) % 5) as f64 * 0.1 + ((j + 2 * i) % 5) as f64 * 0.1);
        let g = QuadraticGenerator::new(a, DVector::from_vec(vec![0.1, -0.2, 0.3, 0.0]), "g").unwrap();
        let m1 = symplectic_of_generator(&g, 0.4).unwrap();
        let m2 = symplectic_of_generator(&g, 0.6).unwrap();
        let m = symplectic_of_generator(&g, 1.0).unwrap();
        let c = m1.then(&m2).unwrap();
        assert!(linalg::max_abs(&(c.s() - m.s())) < 1e-12);
        assert!((c.d() - m.d()).amax() < 1e-12);
        let id = m.then(&m.inverse()).unwrap();
        assert!(linalg::max_abs(&(id.s() - DMatrix::identity(4, 4))) < 1e-12);
        assert!(id.d().amax() < 1e-12);
    }

    #[test]
    fn coherent_overlap() {
        let v = vacuum(1).unwrap();
        let w = v.with_mean(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert!((overlap(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!((overlap(&v, &w).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        let mixed = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(overlap(&v, &mixed), Err(Error::Unsupported(_))));
    }

    #[test]
    fn two_mode_squeezer_ladder_rewrite() {
        // i(a₁⁺a₂⁺ − a₁a₂) = X₁P₂ + P₁X₂
        let z = C64::new(0.0, 0.0);
        let mut d = DMatrix::from_element(2, 2, z);
        d[(0, 1)] = C64::new(0.0, 1.0);
        d[(1, 0)] = C64::new(0.0, 1.0);
        let lq = LadderQuadratic::new(DMatrix::from_element(2, 2, z), d, DVector::from_element(2, z), 0.0).unwrap();
        let (g, offset) = lq.to_generator("tms").unwrap();
        let mut a = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
            a[(i, j)] = 1.0;
        }
        assert!(linalg::max_abs(&(g.a() - a)) < 1e-15);
        assert_eq!(offset, 0.0);
    }

    #[test]
    fn number_operator_rewrite_has_zero_point_offset() {
        let z = C64::new(0.0, 0.0);
        let lq = LadderQuadratic::new(
            DMatrix::identity(1, 1).map(|x: f64| C64::new(x, 0.0)),
            DMatrix::from_element(1, 1, z),
            DVector::from_element(1, C64::new(1.0, 2.0)),
            0.0,
        )
        .unwrap();
        let (g, offset) = lq.to_generator("n").unwrap();
        assert!(linalg::max_abs(&(g.a() - DMatrix::identity(2, 2))) < 1e-15);
        assert!((offset + 0.5).abs() < 1e-15);
        assert!((g.b()[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.b()[1] - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let back = LadderQuadratic::from_generator(&g);
        assert!(linalg::max_abs(&(back.c - &lq.c)) < 1e-15);
        assert!((back.f[0] - lq.f[0]).norm() < 1e-15);
    }

    #[test]
    fn fock_operator_matches_quadrature_products_in_the_bulk() {
        let a = DMatrix::from_row_slice(2, 2, &[0.3, 0.5, 0.5, -0.2]);
        let g = QuadraticGenerator::new(a.clone(), DVector::from_vec(vec![0.4, -0.1]), "g").unwrap();
        let space = FockSpace::new(1, 12).unwrap();
        let h = g.fock_operator(space).unwrap();
        let (x, p) = fock::quadratures(space, 0).unwrap();
        let r = [x.clone(), p.clone()];
        let mut brute = x.scale(C64::new(0.4, 0.0)).axpy(C64::new(-0.1, 0.0), &p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                brute = brute.axpy(C64::new(0.5 * a[(i, j)], 0.0), &r[i].mul(&r[j]).unwrap()).unwrap();
            }
        }
        assert!(h.sub(&brute).unwrap().project(10).max_abs() < 1e-13);
        assert!(h.sub(&h.adjoint()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn amplitudes_of_a_coherent_state() {
        let s = vacuum(1).unwrap().with_mean(DVector::from_vec(vec![0.6, -0.2])).unwrap();
        let v = fock_amplitudes(&s, FockSpace::new(1, 30).unwrap()).unwrap();
        let alpha = C64::new(0.6, -0.2) / 2f64.sqrt();
        let mut fact = 1.0;
        for k in 0..10 {
            if k > 0 {
                fact *= k as f64;
            }
            let expect = (-0.5 * alpha.norm_sqr()).exp() * alpha.powi(k) / fact.sqrt();
            assert!((v.coeffs()[k as usize] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn amplitudes_reproduce_moments() {
        let a = DMatrix::from_row_slice(4, 4, &[0.2, 0.1, 0.0, 0.3, 0.1, -0.1, 0.2, 0.0, 0.0, 0.2, 0.1, 0.1, 0.3, 0.0, 0.1, 0.0]);
        let g = QuadraticGenerator::new(a, DVector::from_vec(vec![0.2, 0.0, -0.3, 0.1]), "g").unwrap();
        let m = symplectic_of_generator(&g, 1.0).unwrap();
        let s = apply_map(&vacuum(2).unwrap(), &m).unwrap();
        let v = fock_amplitudes(&s, FockSpace::new(2, 20).unwrap()).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-9, "{}", v.norm());
        let (mean, cov) = fock_moments(&v).unwrap();
        assert!((&mean - s.mean()).amax() < 1e-8, "{mean} {}", s.mean());
        assert!(linalg::max_abs(&(cov - s.cov())) < 1e-8);
    }
}
