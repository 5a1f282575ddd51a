// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Structure matrices and the three quadratic SU(1,1) realizations.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{arg, Error, Result};
use crate::fock::{self, FockOperator, FockSpace, FockVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    /// Relative-coordinate metric, `(n−1)×(n−1)`.
    N,
    /// `(n−1)×(n−1)`, diagonal `(n−1)/(2n)`, off-diagonal `−1/(2n)`.
    F,
    /// Inverse of `F`: diagonal 4, off-diagonal 2.
    Finv,
    /// Involution `I − 2G′`.
    G,
    /// Rank-one projector onto the symmetric mode.
    Gp,
    /// Complementary projector `I − G′`.
    Gpp,
}

impl StructureKind {
    pub const ALL: [StructureKind; 6] = [Self::N, Self::F, Self::Finv, Self::G, Self::Gp, Self::Gpp];

    pub fn name(self) -> &'static str {
        match self {
            Self::N => "N",
            Self::F => "F",
            Self::Finv => "Finv",
            Self::G => "G",
            Self::Gp => "Gp",
            Self::Gpp => "Gpp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureMatrix {
    kind: StructureKind,
    n: usize,
    entries: DMatrix<f64>,
}

impl StructureMatrix {
    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

pub fn structure_matrix(kind: StructureKind, n: usize) -> Result<StructureMatrix> {
    if n < 2 {
        return arg(format!("structure matrices need n >= 2, got {n}"));
    }
    let nf = n as f64;
    let (size, diag, off) = match kind {
        StructureKind::N => (n - 1, (nf - 1.0) / nf, -1.0 / nf),
        StructureKind::F => (n - 1, (nf - 1.0) / (2.0 * nf), -1.0 / (2.0 * nf)),
        StructureKind::Finv => (n - 1, 4.0, 2.0),
        StructureKind::G => (n, 1.0 - 2.0 / nf, -2.0 / nf),
        StructureKind::Gp => (n, 1.0 / nf, 1.0 / nf),
        StructureKind::Gpp => (n, (nf - 1.0) / nf, -1.0 / nf),
    };
    let entries = DMatrix::from_fn(size, size, |i, j| if i == j { diag } else { off });
    Ok(StructureMatrix { kind, n, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Realization {
    G,
    Gp,
    Gpp,
}

impl Realization {
    pub const ALL: [Realization; 3] = [Self::G, Self::Gp, Self::Gpp];

    pub fn kind(self) -> StructureKind {
        match self {
            Self::G => StructureKind::G,
            Self::Gp => StructureKind::Gp,
            Self::Gpp => StructureKind::Gpp,
        }
    }

    /// Vacuum value of `K₀`.
    pub fn vacuum_k0(self, n: usize) -> f64 {
        match self {
            Self::G => n as f64 / 4.0,
            Self::Gp => 0.25,
            Self::Gpp => (n as f64 - 1.0) / 4.0,
        }
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su11Triple {
    pub k_plus: FockOperator,
    pub k_minus: FockOperator,
    pub k_zero: FockOperator,
    pub realization: Realization,
}

/// `K₊ = ½ a⁺M a⁺` with `M` the realization's matrix. `K₀` is
/// `½ a⁺a + n/4` for `G`, `½ a⁺G′a + ¼` for `G′` and `½ a⁺G″a + (n−1)/4`
/// for `G″`; in each case the number part is `½ a⁺M²a` and the constant is
/// `¼ tr M²`.
pub fn su11_generators(space: FockSpace, realization: Realization) -> Result<Su11Triple> {
    let n = space.n_modes();
    let m = structure_matrix(realization.kind(), n)?.entries;
    let m2 = &m * &m;
    let lad = fock::ladders(space)?;
    let mut k_plus = FockOperator::zeros(space);
    let mut number = FockOperator::zeros(space);
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != 0.0 {
                k_plus = k_plus.axpy(C64::new(0.5 * m[(i, j)], 0.0), &lad[i].1.mul(&lad[j].1)?)?;
            }
            if m2[(i, j)].abs() > 1e-15 {
                number = number.axpy(C64::new(0.5 * m2[(i, j)], 0.0), &lad[i].1.mul(&lad[j].0)?)?;
            }
        }
    }
    let k_zero = number.add(&FockOperator::identity(space).scale(C64::new(realization.vacuum_k0(n), 0.0)))?;
    let k_minus = k_plus.adjoint();
    Ok(Su11Triple { k_plus, k_minus, k_zero, realization })
}

/// Frobenius norms of `[K₋,K₊] − 2K₀`, `[K₀,K₊] − K₊` and `[K₀,K₋] + K₋`
/// after projecting to total photon number `k`.
pub fn closure_residuals(t: &Su11Triple, k: usize) -> Result<[f64; 3]> {
    let c1 = fock::commutator(&t.k_minus, &t.k_plus)?.sub(&t.k_zero.scale(C64::new(2.0, 0.0)))?;
    let c2 = fock::commutator(&t.k_zero, &t.k_plus)?.sub(&t.k_plus)?;
    let c3 = fock::commutator(&t.k_zero, &t.k_minus)?.add(&t.k_minus)?;
    Ok([c1, c2, c3].map(|c| c.project(k).frobenius_norm()))
}

/// Sign carried by `K₋` in the rightmost factor of the normal-ordered form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoweringSign {
    /// `exp(−K₋ tanh μ)`, the form that equals `exp[μ(K₊ − K₋)]`.
    Standard,
    /// `exp(+K₋ tanh μ)`.
    Flipped,
}

/// Largest `|λ|` accepted by [`disentangled_squeeze`].
pub const LAMBDA_ENVELOPE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisentangleOptions {
    /// Total photon number kept in the returned operators.
    pub report_level: usize,
    /// Total photon cap of the working space for the direct exponential.
    pub working_cap: usize,
    pub lowering: LoweringSign,
}

impl DisentangleOptions {
    /// Report through `d−6`, work up to total `2d+4`, standard sign.
    pub fn for_cutoff(d: usize) -> Self {
        Self { report_level: d.saturating_sub(6), working_cap: 2 * d + 4, lowering: LoweringSign::Standard }
    }
}

/// Both sides of the disentangling identity for `μ = sign·λ`:
///
/// direct `exp[μ(K₊ − K₋)]` and factored
/// `exp(K₊ tanh μ) exp(2K₀ ln sech λ) exp(∓K₋ tanh μ)`.
///
/// Entries are returned on `space` for the block of total photon number at
/// most `opts.report_level`.
pub fn disentangled_squeeze(
    space: FockSpace,
    realization: Realization,
    lambda: f64,
    sign: i32,
    opts: DisentangleOptions,
) -> Result<(FockOperator, FockOperator)> {
    let direct = direct_squeeze(space, realization, lambda, sign, opts)?;
    let factored = factored_squeeze(space, realization, lambda, sign, opts)?;
    Ok((direct, factored))
}

fn check_squeeze_args(space: FockSpace, lambda: f64, sign: i32, opts: &DisentangleOptions) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() > LAMBDA_ENVELOPE {
        return Err(Error::Range(format!("|lambda| must be at most {LAMBDA_ENVELOPE}, got {lambda}")));
    }
    if sign != 1 && sign != -1 {
        return arg(format!("sign must be +1 or -1, got {sign}"));
    }
    if opts.report_level > space.max_total() {
        return arg(format!("report level {} exceeds the space", opts.report_level));
    }
    Ok(())
}

/// `exp[sign·λ(K₊ − K₋)]` on the low block, evaluated on a capped working
/// space so that truncation does not reach the block.
pub fn direct_squeeze(
    space: FockSpace,
    realization: Realization,
    lambda: f64,
    sign: i32,
    opts: DisentangleOptions,
) -> Result<FockOperator> {
    check_squeeze_args(space, lambda, sign, &opts)?;
    let k = opts.report_level;
    let working = FockSpace::capped(space.n_modes(), opts.working_cap.max(k))?;
    let w = su11_generators(working, realization)?;
    let gen = w.k_plus.sub(&w.k_minus)?.scale(C64::new(sign as f64 * lambda, 0.0));
    fock::restricted_action(space, working, k, |v| fock::expm_apply(&gen, v))
}

/// Normal-ordered product on the low block. It needs no extra room: the
/// outer factors only raise or only lower, and the middle one conserves
/// the photon number, so every entry in the block is exact.
pub fn factored_squeeze(
    space: FockSpace,
    realization: Realization,
    lambda: f64,
    sign: i32,
    opts: DisentangleOptions,
) -> Result<FockOperator> {
    check_squeeze_args(space, lambda, sign, &opts)?;
    let k = opts.report_level;
    let low = FockSpace::capped(space.n_modes(), k)?;
    let f = su11_generators(low, realization)?;
    let t = (sign as f64 * lambda).tanh();
    let lower_sign = match opts.lowering {
        LoweringSign::Standard => -1.0,
        LoweringSign::Flipped => 1.0,
    };
    let raise = f.k_plus.scale(C64::new(t, 0.0));
    let lower = f.k_minus.scale(C64::new(lower_sign * t, 0.0));
    let middle = f.k_zero.scale(C64::new(2.0 * (1.0 / lambda.cosh()).ln(), 0.0));
    fock::restricted_action(space, low, k, |v| {
        let v = terminating_exp(&lower, v)?;
        let v = fock::expm_apply(&middle, &v)?;
        terminating_exp(&raise, &v)
    })
}

/// `exp(B)v` for a nilpotent `B`, summed until the terms vanish exactly.
fn terminating_exp(b: &FockOperator, v: &FockVector) -> Result<FockVector> {
    let mut sum = v.clone();
    let mut term = v.clone();
    for k in 1..=b.space().max_total() + 2 {
        term = b.apply(&term)?.scale(C64::new(1.0 / k as f64, 0.0));
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        sum = sum.axpy(C64::new(1.0, 0.0), &term)?;
    }
    Err(Error::Numeric("series of a nilpotent operator did not terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn f_matrix_at_three_modes() {
        let f = structure_matrix(StructureKind::F, 3).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0]);
        assert!(max_abs(&(f.entries() - expect)) < 1e-16);
        assert!(structure_matrix(StructureKind::G, 1).is_err());
    }

    #[test]
    fn g_at_two_modes_is_the_swap_with_sign() {
        let g = structure_matrix(StructureKind::G, 2).unwrap();
        assert_eq!(g.entries(), &DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]));
    }

    #[test]
    fn g_spectrum() {
        for n in 2..7 {
            let g = structure_matrix(StructureKind::G, n).unwrap().entries;
            let mut ev: Vec<f64> = g.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!((ev[0] + 1.0).abs() < 1e-12);
            assert!(ev[1..].iter().all(|x| (x - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn two_mode_k_plus_is_minus_pair_creation() {
        let s = FockSpace::new(2, 6).unwrap();
        let t = su11_generators(s, Realization::G).unwrap();
        let lad = fock::ladders(s).unwrap();
        let pair = lad[0].1.mul(&lad[1].1).unwrap();
        assert!(t.k_plus.add(&pair).unwrap().max_abs() < 1e-15);
        assert_eq!(t.k_minus, t.k_plus.adjoint());
    }

    #[test]
    fn vacuum_k0() {
        for n in 2..4 {
            let s = FockSpace::new(n, 4).unwrap();
            for r in Realization::ALL {
                let t = su11_generators(s, r).unwrap();
                assert!((t.k_zero.get(0, 0).re - r.vacuum_k0(n)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn closure_at_small_cutoff() {
        let s = FockSpace::new(2, 10).unwrap();
        for r in Realization::ALL {
            let res = closure_residuals(&su11_generators(s, r).unwrap(), 6).unwrap();
            assert!(res.iter().all(|x| *x < 1e-10), "{r}: {res:?}");
        }
    }

    #[test]
    fn zero_lambda_gives_identity_on_the_block() {
        let s = FockSpace::new(2, 8).unwrap();
        let (d, f) = disentangled_squeeze(s, Realization::G, 0.0, 1, DisentangleOptions::for_cutoff(8)).unwrap();
        let id = FockOperator::identity(s).project(2);
        assert!(d.sub(&id).unwrap().max_abs() < 1e-15);
        assert!(f.sub(&id).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn lambda_outside_envelope_is_a_range_error() {
        let s = FockSpace::new(2, 8).unwrap();
        let r = disentangled_squeeze(s, Realization::G, 1.5, 1, DisentangleOptions::for_cutoff(8));
        assert!(matches!(r, Err(Error::Range(_))));
    }

    #[test]
    fn two_mode_disentangling_small_cutoff() {
        let s = FockSpace::new(2, 10).unwrap();
        let (d, f) = disentangled_squeeze(s, Realization::G, 0.3, 1, DisentangleOptions::for_cutoff(10)).unwrap();
        assert!(d.sub(&f).unwrap().frobenius_norm() < 1e-10);
    }
}
