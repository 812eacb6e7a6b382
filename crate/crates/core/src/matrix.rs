//! Small dense complex matrix helpers (point values of matrix functions,
//! pointer matrices) and the `[re, im]` wire representation.

use crate::error::{Error, Result};
use crate::scalar::{cabs, CMat, Cplx, Real};
use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

/// Wire form of a complex matrix: rows of `[re, im]` pairs.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMat<T> {
    DMatrix::from_element(rows, cols, Complex::new(T::zero(), T::zero()))
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    DMatrix::identity(n, n)
}

/// Builds a matrix from real row data; handy for constants like `[1, 0]`.
pub fn from_real_rows<T: Real>(rows: &[&[f64]]) -> CMat<T> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    DMatrix::from_fn(r, c, |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
}

pub fn to_repr<T: Real>(m: &CMat<T>) -> MatrixRepr {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()])
                .collect()
        })
        .collect()
}

/// Parses the wire form. `cols_hint` fixes the column count of a matrix with
/// zero rows (which the nested-array form cannot carry).
pub fn from_repr<T: Real>(repr: &MatrixRepr, cols_hint: Option<usize>) -> Result<CMat<T>> {
    let rows = repr.len();
    let cols = repr.first().map(|r| r.len()).or(cols_hint).unwrap_or(0);
    if repr.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    let mut out = zeros::<T>(rows, cols);
    for (i, row) in repr.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(Error::Format(format!("non-finite entry at ({i},{j})")));
            }
            out[(i, j)] = Complex::new(T::lit(v[0]), T::lit(v[1]));
        }
    }
    Ok(out)
}

pub fn frobenius<T: Real>(m: &CMat<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<T> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

pub fn spectral_norm<T: Real>(m: &CMat<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Eigenvalues of the Hermitian part `(A + A*)/2`, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMat<T>) -> Vec<T> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let herm = hermitize(m);
    let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

pub fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    let half = T::lit(0.5);
    (m + m.adjoint()).map(|z| Complex::new(z.re * half, z.im * half))
}

/// Inverse with a condition-number guard (2-norm condition).
pub fn inverse_checked<T: Real>(m: &CMat<T>, max_condition: f64) -> Result<CMat<T>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let sv = singular_values(m);
    let smax = sv[0];
    let smin = *sv.last().unwrap();
    let cond = if smin > T::zero() { (smax / smin).as_f64() } else { f64::INFINITY };
    if !(cond <= max_condition) {
        return Err(Error::NearSingular(cond));
    }
    m.clone().try_inverse().ok_or(Error::NearSingular(cond))
}

pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

pub fn scale<T: Real>(m: &CMat<T>, s: Cplx<T>) -> CMat<T> {
    m.map(|z| z * s)
}

pub fn is_finite<T: Real>(m: &CMat<T>) -> bool {
    m.iter().all(|z| z.re.is_finite_value() && z.im.is_finite_value())
}

/// Absolute value of a complex number through nalgebra's trait, used where
/// generic code holds a `ComplexField` rather than a `Cplx`.
pub fn modulus<T: Real>(z: Cplx<T>) -> T {
    ComplexField::modulus(z)
}

/// C-style `%.12e` formatting (`-1.234567890123e-05`), used for every float
/// written to CSV so that outputs are byte-stable.
pub fn fmt_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // negative zero prints as zero
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{:.12e}", x);
    let (mantissa, exp) = s.split_once('e').expect("LowerExp always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_exponent_formatting() {
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-0.000012345), "-1.234500000000e-05");
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(-0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(6.02e123), "6.020000000000e+123");
    }

    #[test]
    fn repr_round_trip_keeps_empty_column_count() {
        let m = zeros::<f64>(0, 3);
        let back: CMat<f64> = from_repr(&to_repr(&m), Some(3)).unwrap();
        assert_eq!(back.shape(), (0, 3));
        let d = from_real_rows::<f64>(&[&[1.0, 0.0]]);
        let back: CMat<f64> = from_repr(&to_repr(&d), None).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn inverse_guard_rejects_singular() {
        let m = from_real_rows::<f64>(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(inverse_checked(&m, 1e12), Err(Error::NearSingular(_))));
        let m = from_real_rows::<f64>(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let inv = inverse_checked(&m, 1e12).unwrap();
        assert!((inv[(1, 1)].re - 0.25).abs() < 1e-15);
    }
}
