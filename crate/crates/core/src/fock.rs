// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space engine.
//!
//! A [`FockSpace`] holds `n` bosonic modes with levels `0..cutoff` per mode.
//! Basis states are laid out row-major over the occupation tuple: mode 0 is
//! the slowest-varying digit, so `|k₀, k₁, …⟩` sits at
//! `Σ kᵢ · cutoff^(n−1−i)`. This layout never changes; golden files and the
//! CLI dumps depend on it.
//!
//! A space may additionally carry a cap on the total photon number. States
//! above the cap are inactive: ladder operators never map into them. Capped
//! spaces serve as working spaces for exponentials of number-changing
//! generators, where the per-mode box alone lets truncation error leak back
//! into the low levels.
//!
//! Operators are stored as compressed sparse columns. Every quadratic
//! generator in this crate has at most a few nonzeros per column, and the
//! dense route is still available through [`FockOperator::to_dense`] and
//! [`op_exp`].

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{arg, Error, Result};
use crate::linalg;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Largest dimension accepted by the dense [`op_exp`].
pub const DENSE_EXP_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    n_modes: usize,
    cutoff: usize,
    max_total: usize,
}

impl FockSpace {
    /// Space of `n_modes` modes with levels `0..cutoff` each.
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes < 1 {
            return arg("a Fock space needs at least one mode");
        }
        if cutoff < 2 {
            return arg(format!("cutoff must be at least 2, got {cutoff}"));
        }
        if (cutoff as f64).powi(n_modes as i32) > 1.0e8 {
            return Err(Error::Range(format!("{cutoff}^{n_modes} basis states is too large")));
        }
        Ok(Self { n_modes, cutoff, max_total: n_modes * (cutoff - 1) })
    }

    /// Space whose active states are exactly those with total photon number
    /// at most `max_total`. The per-mode cutoff is `max_total + 1`, so only
    /// the total cap ever binds.
    pub fn capped(n_modes: usize, max_total: usize) -> Result<Self> {
        let mut s = Self::new(n_modes, max_total + 1)?;
        s.max_total = max_total;
        Ok(s)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Largest total photon number of an active state.
    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn dimension(&self) -> usize {
        self.cutoff.pow(self.n_modes as u32)
    }

    pub fn is_capped(&self) -> bool {
        self.max_total < self.n_modes * (self.cutoff - 1)
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoff.pow((self.n_modes - 1 - mode) as u32)
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return arg(format!("mode {mode} out of range for {} modes", self.n_modes));
        }
        Ok(())
    }

    /// Basis index of an occupation tuple.
    pub fn index(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.n_modes {
            return arg(format!("occupation has {} entries, space has {} modes", occupation.len(), self.n_modes));
        }
        let mut idx = 0;
        for &k in occupation {
            if k >= self.cutoff {
                return arg(format!("level {k} exceeds cutoff {}", self.cutoff));
            }
            idx = idx * self.cutoff + k;
        }
        Ok(idx)
    }

    /// Occupation tuple of a basis index.
    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.n_modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % self.cutoff;
            index /= self.cutoff;
        }
        occ
    }

    fn level(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.cutoff
    }

    pub fn total_photons(&self, mut index: usize) -> usize {
        let mut total = 0;
        while index > 0 {
            total += index % self.cutoff;
            index /= self.cutoff;
        }
        total
    }

    pub fn is_active(&self, index: usize) -> bool {
        self.total_photons(index) <= self.max_total
    }

    /// Indices of active states with total photon number at most `k`, in
    /// ascending index order.
    pub fn low_states(&self, k: usize) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.total_photons(i) <= k.min(self.max_total)).collect()
    }

    fn same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return arg(format!("space mismatch: {self} vs {other}"));
        }
        Ok(())
    }
}

impl fmt::Display for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} modes x {} levels", self.n_modes, self.cutoff)?;
        if self.is_capped() {
            write!(f, " (total <= {})", self.max_total)?;
        }
        Ok(())
    }
}

/// Coefficient vector on a [`FockSpace`]. May be unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    space: FockSpace,
    coeffs: Vec<C64>,
}

impl FockVector {
    pub fn zeros(space: FockSpace) -> Self {
        Self { space, coeffs: vec![ZERO; space.dimension()] }
    }

    pub fn basis(space: FockSpace, index: usize) -> Result<Self> {
        if index >= space.dimension() {
            return arg(format!("basis index {index} out of range"));
        }
        let mut v = Self::zeros(space);
        v.coeffs[index] = ONE;
        Ok(v)
    }

    pub fn vacuum(space: FockSpace) -> Self {
        let mut v = Self::zeros(space);
        v.coeffs[0] = ONE;
        v
    }

    pub fn from_coeffs(space: FockSpace, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != space.dimension() {
            return arg(format!("{} coefficients for dimension {}", coeffs.len(), space.dimension()));
        }
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn get(&self, occupation: &[usize]) -> Result<C64> {
        Ok(self.coeffs[self.space.index(occupation)?])
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { space: self.space, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &FockVector) -> Result<Self> {
        self.space.same(&other.space)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect();
        Ok(Self { space: self.space, coeffs })
    }

    pub fn sub(&self, other: &FockVector) -> Result<Self> {
        self.axpy(-ONE, other)
    }

    /// Zeroes every coefficient whose total photon number exceeds `k`.
    pub fn project(&self, k: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if self.space.total_photons(i) <= k { c } else { ZERO })
            .collect();
        Self { space: self.space, coeffs }
    }

    /// Copies the coefficients onto `target`, matching basis states by
    /// occupation tuple. States that do not exist in `target` must carry
    /// zero amplitude unless `allow_loss` is set.
    pub fn transfer(&self, target: FockSpace, allow_loss: bool) -> Result<Self> {
        if target.n_modes != self.space.n_modes {
            return arg("transfer between spaces with different mode counts");
        }
        let mut out = Self::zeros(target);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let occ = self.space.occupation(i);
            match target.index(&occ) {
                Ok(j) if target.is_active(j) => out.coeffs[j] = c,
                _ if allow_loss => {}
                _ => return arg(format!("state {occ:?} does not fit in {target}")),
            }
        }
        Ok(out)
    }
}

/// ⟨u|v⟩, conjugate-linear in `u`.
pub fn inner(u: &FockVector, v: &FockVector) -> Result<C64> {
    u.space.same(&v.space)?;
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a.conj() * b).sum())
}

/// Sparse operator on a [`FockSpace`], compressed by columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    values: Vec<C64>,
}

impl FockOperator {
    pub fn zeros(space: FockSpace) -> Self {
        Self { space, col_ptr: vec![0; space.dimension() + 1], rows: Vec::new(), values: Vec::new() }
    }

    /// Identity on the active states of `space`.
    pub fn identity(space: FockSpace) -> Self {
        Self::diagonal(space, |i| if space.is_active(i) { ONE } else { ZERO })
    }

    pub fn diagonal(space: FockSpace, f: impl Fn(usize) -> C64) -> Self {
        let mut cols = vec![Vec::new(); space.dimension()];
        for (i, col) in cols.iter_mut().enumerate() {
            col.push((i, f(i)));
        }
        Self::from_columns(space, cols)
    }

    /// Builds an operator from per-column `(row, value)` lists. Duplicate
    /// rows are summed and exact zeros dropped.
    pub fn from_columns(space: FockSpace, mut cols: Vec<Vec<(usize, C64)>>) -> Self {
        let dim = space.dimension();
        cols.resize(dim, Vec::new());
        let mut col_ptr = Vec::with_capacity(dim + 1);
        let mut rows = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for mut col in cols {
            col.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < col.len() {
                let r = col[k].0;
                let mut acc = ZERO;
                while k < col.len() && col[k].0 == r {
                    acc += col[k].1;
                    k += 1;
                }
                if acc != ZERO {
                    rows.push(r);
                    values.push(acc);
                }
            }
            col_ptr.push(rows.len());
        }
        Self { space, col_ptr, rows, values }
    }

    pub fn from_dense(space: FockSpace, m: &DMatrix<C64>) -> Result<Self> {
        let dim = space.dimension();
        if m.nrows() != dim || m.ncols() != dim {
            return arg(format!("dense matrix is {}x{}, space has dimension {dim}", m.nrows(), m.ncols()));
        }
        let cols = (0..dim)
            .map(|j| (0..dim).filter(|&i| m[(i, j)] != ZERO).map(|i| (i, m[(i, j)])).collect())
            .collect();
        Ok(Self::from_columns(space, cols))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.space.dimension();
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for j in 0..dim {
            for (i, v) in self.column(j) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero entries of column `j` as `(row, value)`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.col_ptr[j], self.col_ptr[j + 1]);
        self.rows[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.column(col).find(|e| e.0 == row).map(|e| e.1).unwrap_or(ZERO)
    }

    fn columns(&self) -> Vec<Vec<(usize, C64)>> {
        (0..self.space.dimension()).map(|j| self.column(j).collect()).collect()
    }

    fn map_values(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            space: self.space,
            col_ptr: self.col_ptr.clone(),
            rows: self.rows.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zeros(self.space);
        }
        self.map_values(|v| v * s)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &FockOperator) -> Result<Self> {
        self.space.same(&other.space)?;
        let mut cols = self.columns();
        for (j, col) in cols.iter_mut().enumerate() {
            col.extend(other.column(j).map(|(i, v)| (i, s * v)));
        }
        Ok(Self::from_columns(self.space, cols))
    }

    pub fn add(&self, other: &FockOperator) -> Result<Self> {
        self.axpy(ONE, other)
    }

    pub fn sub(&self, other: &FockOperator) -> Result<Self> {
        self.axpy(-ONE, other)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.space.dimension()];
        for j in 0..self.space.dimension() {
            for (i, v) in self.column(j) {
                cols[i].push((j, v.conj()));
            }
        }
        Self::from_columns(self.space, cols)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &FockOperator) -> Result<Self> {
        self.space.same(&other.space)?;
        let dim = self.space.dimension();
        let mut acc = vec![ZERO; dim];
        let mut seen = vec![false; dim];
        let mut touched = Vec::new();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            for (k, b) in other.column(j) {
                for (i, a) in self.column(k) {
                    if !seen[i] {
                        seen[i] = true;
                        touched.push(i);
                    }
                    acc[i] += a * b;
                }
            }
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                col.push((i, acc[i]));
                acc[i] = ZERO;
                seen[i] = false;
            }
            touched.clear();
            cols.push(col);
        }
        Ok(Self::from_columns(self.space, cols))
    }

    /// Zeroes every row and column whose total photon number exceeds `k`.
    pub fn project(&self, k: usize) -> Self {
        let keep: Vec<bool> = (0..self.space.dimension()).map(|i| self.space.total_photons(i) <= k).collect();
        let cols = (0..self.space.dimension())
            .map(|j| if keep[j] { self.column(j).filter(|e| keep[e.0]).collect() } else { Vec::new() })
            .collect();
        Self::from_columns(self.space, cols)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.space.dimension()).map(|j| self.column(j).map(|e| e.1.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `out = s·A·x` on raw coefficient slices.
    fn apply_slice(&self, x: &[C64], out: &mut [C64], s: f64) {
        out.iter_mut().for_each(|o| *o = ZERO);
        for (j, &xj) in x.iter().enumerate() {
            if xj == ZERO {
                continue;
            }
            let xj = xj * s;
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                out[self.rows[k]] += self.values[k] * xj;
            }
        }
    }

    /// Applies the operator to a vector.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.space.same(&v.space)?;
        let mut out = vec![ZERO; self.space.dimension()];
        for (j, &x) in v.coeffs.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (i, a) in self.column(j) {
                out[i] += a * x;
            }
        }
        Ok(FockVector { space: self.space, coeffs: out })
    }
}

/// `AB − BA`.
pub fn commutator(a: &FockOperator, b: &FockOperator) -> Result<FockOperator> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Annihilator and creator of `mode`, acting as identity on other modes.
/// The creator is the exact conjugate transpose of the annihilator.
pub fn make_ladder(space: FockSpace, mode: usize) -> Result<(FockOperator, FockOperator)> {
    space.check_mode(mode)?;
    let stride = space.stride(mode);
    let cols = (0..space.dimension())
        .map(|j| {
            let k = space.level(j, mode);
            if k >= 1 && space.is_active(j) {
                vec![(j - stride, C64::new((k as f64).sqrt(), 0.0))]
            } else {
                Vec::new()
            }
        })
        .collect();
    let a = FockOperator::from_columns(space, cols);
    let ad = a.adjoint();
    Ok((a, ad))
}

/// `X = (a + a⁺)/√2`, `P = (a − a⁺)/(i√2)` on `mode`.
pub fn quadratures(space: FockSpace, mode: usize) -> Result<(FockOperator, FockOperator)> {
    let (a, ad) = make_ladder(space, mode)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = a.add(&ad)?.scale(C64::new(s, 0.0));
    let p = a.sub(&ad)?.scale(C64::new(0.0, -s));
    Ok((x, p))
}

/// Ladder operators for every mode, in mode order.
pub fn ladders(space: FockSpace) -> Result<Vec<(FockOperator, FockOperator)>> {
    (0..space.n_modes).map(|m| make_ladder(space, m)).collect()
}

/// Quadrature pairs for every mode, in mode order.
pub fn all_quadratures(space: FockSpace) -> Result<Vec<(FockOperator, FockOperator)>> {
    (0..space.n_modes).map(|m| quadratures(space, m)).collect()
}

/// Dense matrix exponential of an operator.
pub fn op_exp(a: &FockOperator) -> Result<FockOperator> {
    if !a.is_finite() {
        return Err(Error::Numeric("operator has non-finite entries".into()));
    }
    let dim = a.space.dimension();
    if dim > DENSE_EXP_LIMIT {
        return Err(Error::Range(format!("dense exponential limited to dimension {DENSE_EXP_LIMIT}, got {dim}")));
    }
    let e = linalg::expm(&a.to_dense())?;
    FockOperator::from_dense(a.space, &e)
}

/// `exp(A)·v` without forming the exponential.
///
/// Runs the Taylor series in `s` sub-steps, doubling `s` whenever a term
/// grows past 10³ times the current iterate or the series fails to settle.
/// The growth bound keeps cancellation error below ~1e−13 relative, and the
/// cost tracks the part of the space the vector actually reaches rather
/// than the norm of the whole operator.
pub fn expm_apply(a: &FockOperator, v: &FockVector) -> Result<FockVector> {
    a.space.same(&v.space)?;
    if !a.is_finite() || v.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Numeric("non-finite input to expm_apply".into()));
    }
    const MAX_TERMS: usize = 80;
    let dim = a.space.dimension();
    let norm = |x: &[C64]| x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut term = vec![ZERO; dim];
    let mut next = vec![ZERO; dim];
    let mut steps = 1usize;
    'outer: loop {
        if steps > 1 << 16 {
            return Err(Error::Numeric("expm_apply failed to converge".into()));
        }
        let h = 1.0 / steps as f64;
        let mut w = v.coeffs.clone();
        for _ in 0..steps {
            let base = norm(&w);
            if base == 0.0 {
                break;
            }
            term.copy_from_slice(&w);
            let mut quiet = 0;
            let mut converged = false;
            for k in 1..=MAX_TERMS {
                a.apply_slice(&term, &mut next, h / k as f64);
                std::mem::swap(&mut term, &mut next);
                let tn = norm(&term);
                if tn > 1.0e3 * base {
                    steps *= 2;
                    continue 'outer;
                }
                for (s, t) in w.iter_mut().zip(&term) {
                    *s += t;
                }
                if tn <= 1.0e-16 * base {
                    quiet += 1;
                    if quiet >= 2 {
                        converged = true;
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            if !converged {
                steps *= 2;
                continue 'outer;
            }
        }
        return Ok(FockVector { space: v.space, coeffs: w });
    }
}

/// `exp(B)|vac⟩` for an operator `B` that strictly raises the total photon
/// number.
///
/// Each application of `B` moves weight up at least one level, so on the
/// truncated space the series ends after at most `max_total` terms and
/// every coefficient is exact. The loop runs to `max_total + 2` and
/// reports an error if the tail has not vanished.
pub fn raising_exp_vacuum(b: &FockOperator) -> Result<FockVector> {
    let space = b.space;
    let mut sum = FockVector::vacuum(space);
    let mut term = sum.clone();
    let order = space.max_total + 2;
    for k in 1..=order {
        term = b.apply(&term)?.scale(C64::new(1.0 / k as f64, 0.0));
        if term.coeffs.iter().all(|c| *c == ZERO) {
            return Ok(sum);
        }
        sum = sum.axpy(ONE, &term)?;
    }
    Err(Error::Argument("series did not terminate: operator is not number-raising".into()))
}

/// Matrix of a linear action restricted to the low block of `report`.
///
/// For each basis state of `report` with total photon number at most `k`,
/// the state is lifted into `working`, mapped by `f`, brought back and
/// projected to total photon number `k`. Columns and rows outside the block
/// are zero. Choosing a `working` space much larger than `k` keeps the
/// truncation of `working` out of the reported entries.
pub fn restricted_action(
    report: FockSpace,
    working: FockSpace,
    k: usize,
    f: impl Fn(&FockVector) -> Result<FockVector>,
) -> Result<FockOperator> {
    if working.n_modes != report.n_modes {
        return arg("working and report spaces have different mode counts");
    }
    if working.max_total < k {
        return arg(format!("working space {working} cannot hold level {k}"));
    }
    let mut cols = vec![Vec::new(); report.dimension()];
    for j in report.low_states(k) {
        let v = FockVector::basis(report, j)?.transfer(working, false)?;
        let w = f(&v)?.project(k).transfer(report, true)?;
        cols[j] = w.coeffs.iter().enumerate().filter(|(i, c)| **c != ZERO && report.total_photons(*i) <= k).map(|(i, &c)| (i, c)).collect();
    }
    Ok(FockOperator::from_columns(report, cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn space_validation_and_layout() {
        assert!(FockSpace::new(0, 4).is_err());
        assert!(FockSpace::new(2, 1).is_err());
        let s = FockSpace::new(3, 4).unwrap();
        assert_eq!(s.dimension(), 64);
        assert_eq!(s.index(&[1, 2, 3]).unwrap(), 16 + 8 + 3);
        assert_eq!(s.occupation(27), vec![1, 2, 3]);
        assert_eq!(s.total_photons(27), 6);
        assert!(s.index(&[4, 0, 0]).is_err());
    }

    #[test]
    fn ladder_matrix_entries() {
        let s = FockSpace::new(1, 3).unwrap();
        let (a, ad) = make_ladder(s, 0).unwrap();
        assert_eq!(a.get(1, 2), c(2f64.sqrt()));
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!(ad, a.adjoint());
        assert!(make_ladder(s, 1).is_err());
    }

    #[test]
    fn annihilator_kills_vacuum() {
        let s = FockSpace::new(2, 5).unwrap();
        for m in 0..2 {
            let (a, _) = make_ladder(s, m).unwrap();
            assert_eq!(a.apply(&FockVector::vacuum(s)).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn canonical_commutator_below_top_level() {
        let s = FockSpace::new(1, 8).unwrap();
        let (a, ad) = make_ladder(s, 0).unwrap();
        let comm = commutator(&a, &ad).unwrap();
        let diff = comm.sub(&FockOperator::identity(s)).unwrap();
        assert!(diff.project(6).max_abs() < 1e-12);
        assert!(diff.max_abs() > 1.0);
    }

    #[test]
    fn quadrature_pair_and_collective_commutators() {
        let s = FockSpace::new(1, 10).unwrap();
        let (x, p) = quadratures(s, 0).unwrap();
        let d = commutator(&x, &p).unwrap().sub(&FockOperator::identity(s).scale(C64::i())).unwrap();
        assert!(d.project(8).max_abs() < 1e-12);
        assert!(x.sub(&x.adjoint()).unwrap().max_abs() == 0.0);
        assert!(p.sub(&p.adjoint()).unwrap().max_abs() == 0.0);

        let s = FockSpace::new(3, 6).unwrap();
        let q = all_quadratures(s).unwrap();
        let id = FockOperator::identity(s);
        for k in 1..3 {
            let dx = q[0].0.sub(&q[k].0).unwrap();
            let dp = q[0].1.sub(&q[k].1).unwrap();
            let r = commutator(&dx, &dp).unwrap().sub(&id.scale(C64::new(0.0, 2.0))).unwrap();
            assert!(r.project(4).max_abs() < 1e-12);
        }
        let sx = q[1..].iter().fold(q[0].0.clone(), |acc, o| acc.add(&o.0).unwrap());
        let sp = q[1..].iter().fold(q[0].1.clone(), |acc, o| acc.add(&o.1).unwrap());
        let r = commutator(&sx, &sp).unwrap().sub(&id.scale(C64::new(0.0, 3.0))).unwrap();
        assert!(r.project(4).max_abs() < 1e-12);
    }

    #[test]
    fn different_modes_commute_exactly() {
        let s = FockSpace::new(2, 5).unwrap();
        let q = all_quadratures(s).unwrap();
        let (a0, _) = make_ladder(s, 0).unwrap();
        let (_, ad1) = make_ladder(s, 1).unwrap();
        assert_eq!(commutator(&q[0].0, &q[1].1).unwrap().nnz(), 0);
        assert_eq!(commutator(&a0, &ad1).unwrap().nnz(), 0);
    }

    #[test]
    fn self_commutator_vanishes_and_full_projection_is_identity() {
        let s = FockSpace::new(2, 4).unwrap();
        let (x, _) = quadratures(s, 1).unwrap();
        assert_eq!(commutator(&x, &x).unwrap().nnz(), 0);
        let v = FockVector::from_coeffs(s, (0..16).map(|k| C64::new(k as f64, 1.0)).collect()).unwrap();
        assert_eq!(v.project(6), v);
    }

    #[test]
    fn basis_is_orthonormal() {
        let s = FockSpace::new(1, 4).unwrap();
        let (a, ad) = make_ladder(s, 0).unwrap();
        let e0 = FockVector::basis(s, 0).unwrap();
        let e1 = FockVector::basis(s, 1).unwrap();
        assert_eq!(inner(&e0, &ad.apply(&e0).unwrap()).unwrap(), ZERO);
        assert_eq!(inner(&a.apply(&e1).unwrap(), &e0).unwrap(), c(1.0));
    }

    #[test]
    fn space_mismatch_is_an_argument_error() {
        let s1 = FockSpace::new(1, 4).unwrap();
        let s2 = FockSpace::new(1, 5).unwrap();
        let (a, _) = make_ladder(s1, 0).unwrap();
        let (b, _) = make_ladder(s2, 0).unwrap();
        assert!(matches!(commutator(&a, &b), Err(Error::Argument(_))));
        assert!(matches!(a.apply(&FockVector::vacuum(s2)), Err(Error::Argument(_))));
    }

    #[test]
    fn op_exp_identity_and_unitarity() {
        let s = FockSpace::new(1, 16).unwrap();
        assert_eq!(op_exp(&FockOperator::zeros(s)).unwrap().to_dense(), DMatrix::identity(16, 16));
        let (x, _) = quadratures(s, 0).unwrap();
        let u = op_exp(&x.scale(C64::new(0.0, 0.3))).unwrap();
        let g = u.adjoint().mul(&u).unwrap().sub(&FockOperator::identity(s)).unwrap();
        assert!(g.project(10).max_abs() < 1e-10);
    }

    #[test]
    fn op_exp_rejects_non_finite() {
        let s = FockSpace::new(1, 3).unwrap();
        let bad = FockOperator::diagonal(s, |_| C64::new(f64::INFINITY, 0.0));
        assert!(matches!(op_exp(&bad), Err(Error::Numeric(_))));
    }

    #[test]
    fn expm_apply_matches_dense_exponential() {
        let s = FockSpace::new(2, 8).unwrap();
        let q = all_quadratures(s).unwrap();
        let gen = q[0].0.mul(&q[1].1).unwrap().scale(C64::new(0.0, 0.8));
        let dense = op_exp(&gen).unwrap();
        let v = FockVector::basis(s, s.index(&[1, 2]).unwrap()).unwrap();
        let a = expm_apply(&gen, &v).unwrap();
        let b = dense.apply(&v).unwrap();
        assert!(a.sub(&b).unwrap().norm() < 1e-12);
    }

    #[test]
    fn capped_space_ladders_respect_the_cap() {
        let s = FockSpace::capped(2, 3).unwrap();
        assert_eq!(s.cutoff(), 4);
        let (_, ad) = make_ladder(s, 0).unwrap();
        let v = FockVector::basis(s, s.index(&[1, 2]).unwrap()).unwrap();
        assert_eq!(ad.apply(&v).unwrap().norm(), 0.0);
        assert_eq!(s.low_states(10).len(), 10);
    }

    #[test]
    fn raising_series_terminates_exactly() {
        let s = FockSpace::new(1, 6).unwrap();
        let (_, ad) = make_ladder(s, 0).unwrap();
        let v = raising_exp_vacuum(&ad.scale(c(0.5))).unwrap();
        for k in 0..6 {
            let expect = 0.5f64.powi(k) / (1..=k).map(|j| (j as f64).sqrt()).product::<f64>();
            assert!((v.coeffs()[k as usize].re - expect).abs() < 1e-15);
        }
        let (a, _) = make_ladder(s, 0).unwrap();
        assert!(raising_exp_vacuum(&a.add(&ad).unwrap()).is_err());
    }
}
