// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense helpers shared by both engines: matrix exponential by
//! scaling-and-squaring with a Padé(13) approximant, the symplectic form,
//! and a least-squares log-slope fit.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

/// Padé(13) coefficients (Higham 2005, Table 10.4).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

pub(crate) fn one_norm<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    a.column_iter()
        .map(|c| c.iter().map(|x| x.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential of a square matrix.
///
/// The 1-norm of `a` is scaled below θ₁₃ = 5.37 before the Padé(13)
/// approximant is applied, then the result is squared back up. This keeps
/// the backward error near unit roundoff for every input norm.
pub fn expm<T>(a: &DMatrix<T>) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Argument(format!("expm needs a square matrix, got {}x{}", n, a.ncols())));
    }
    if a.iter().any(|x| !x.clone().is_finite()) {
        return Err(Error::Numeric("expm input has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(a.clone());
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let scale = T::from_real(2f64.powi(-squarings));
    let a = a * scale;

    let c = |k: usize| T::from_real(PADE13[k]);
    let eye = DMatrix::<T>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u_outer = &a6 * u_inner + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1);
    let u = &a * u_outer;
    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = &a6 * v_inner + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or_else(|| Error::Numeric("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().any(|x| !x.clone().is_finite()) {
        return Err(Error::Numeric("expm overflowed".into()));
    }
    Ok(r)
}

/// Ω = [[0, I], [−I, 0]] for quadrature ordering (X₁…Xₙ, P₁…Pₙ).
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(k, n + k)] = 1.0;
        omega[(n + k, k)] = -1.0;
    }
    omega
}

/// Largest absolute entry.
pub fn max_abs<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    a.iter().map(|x| x.clone().modulus()).fold(0.0, f64::max)
}

/// Least-squares slope of `ln y` against `x`.
///
/// Returns `None` when fewer than two points are usable (non-positive `y`
/// values are skipped) or when every `x` coincides.
pub fn log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0 && v.is_finite())
        .map(|(&a, &b)| (a, b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64 as C64;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(expm(&z).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn exp_of_diagonal_matches_scalar_exp() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![-3.0, 0.5, 12.0]));
        let e = expm(&a).unwrap();
        for (k, v) in [-3.0f64, 0.5, 12.0].iter().enumerate() {
            assert!((e[(k, k)] / v.exp() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_generator_gives_rotation() {
        let t = 0.7;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, t, -t, 0.0]);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)] - t.cos()).abs() < 1e-15);
        assert!((e[(0, 1)] - t.sin()).abs() < 1e-15);
    }

    #[test]
    fn complex_large_norm_inverse_pair() {
        let a = DMatrix::from_fn(5, 5, |i, j| C64::new((i as f64 - j as f64) * 0.9, (i * j) as f64 * 0.3));
        let e = expm(&a).unwrap();
        let f = expm(&(-a)).unwrap();
        let err = max_abs(&(&e * &f - DMatrix::identity(5, 5)));
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn rejects_non_finite_and_non_square() {
        let mut a = DMatrix::<f64>::zeros(2, 2);
        a[(0, 1)] = f64::NAN;
        assert!(matches!(expm(&a), Err(Error::Numeric(_))));
        assert!(matches!(expm(&DMatrix::<f64>::zeros(2, 3)), Err(Error::Argument(_))));
    }

    #[test]
    fn log_slope_recovers_exponent() {
        let x: Vec<f64> = (0..7).map(|k| k as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * (-2.0 * v).exp()).collect();
        assert!((log_slope(&x, &y).unwrap() + 2.0).abs() < 1e-13);
        assert_eq!(log_slope(&[1.0], &[1.0]), None);
    }
}
