//! Finite exponential sums `g(t) = sum_k C_k exp(-a_k t)`, `Re a_k > 0`.

use crate::error::{Error, Result};
use crate::matrix::{self, zeros};
use crate::scalar::{cabs, cexp, cinv, CMat, Cplx, Real};
use num_complex::Complex;

/// Poles closer than this are treated as colliding in partial fractions.
pub const POLE_COLLISION: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm<T: Real> {
    pub coeff: CMat<T>,
    pub rate: Cplx<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum<T: Real> {
    rows: usize,
    cols: usize,
    terms: Vec<ExpTerm<T>>,
}

impl<T: Real> ExpSum<T> {
    pub fn new(rows: usize, cols: usize, terms: Vec<ExpTerm<T>>) -> Result<Self> {
        for (k, term) in terms.iter().enumerate() {
            if term.coeff.shape() != (rows, cols) {
                return Err(Error::DimensionMismatch(format!(
                    "term {k} has shape {:?}, expected ({rows}, {cols})",
                    term.coeff.shape()
                )));
            }
            if !(term.rate.re > T::zero()) || !crate::scalar::cplx_finite(term.rate) {
                return Err(Error::InvalidKernel(format!("term {k}: rate must have Re > 0, got {}", term.rate)));
            }
            if !matrix::is_finite(&term.coeff) {
                return Err(Error::InvalidKernel(format!("term {k}: non-finite coefficient")));
            }
        }
        Ok(Self { rows, cols, terms })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, terms: Vec::new() }
    }

    /// Single term `coeff * exp(-rate t)`.
    pub fn single(coeff: CMat<T>, rate: Cplx<T>) -> Result<Self> {
        let (r, c) = coeff.shape();
        Self::new(r, c, vec![ExpTerm { coeff, rate }])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn terms(&self) -> &[ExpTerm<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| matrix::max_abs(&t.coeff) == T::zero())
    }

    /// Value at `t >= 0`.
    pub fn eval(&self, t: T) -> CMat<T> {
        let mut out = zeros(self.rows, self.cols);
        self.eval_into(t, out.as_mut_slice());
        out
    }

    /// Adds the value at `t` into a column-major buffer of `rows * cols` entries.
    pub fn eval_into(&self, t: T, out: &mut [Cplx<T>]) {
        for term in &self.terms {
            let e = cexp(Complex::new(-term.rate.re * t, -term.rate.im * t));
            for (o, c) in out.iter_mut().zip(term.coeff.iter()) {
                *o += *c * e;
            }
        }
    }

    /// `sum_k C_k / (s + a_k)`.
    pub fn transform(&self, s: Cplx<T>) -> CMat<T> {
        let mut out = zeros(self.rows, self.cols);
        for term in &self.terms {
            let w = cinv(s + term.rate);
            out += matrix::scale(&term.coeff, w);
        }
        out
    }

    /// Upper bound on `int_t0^inf ||g(t)||_F dt`.
    pub fn tail_bound(&self, t0: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, term| {
            acc + matrix::frobenius(&term.coeff) * (-term.rate.re * t0).exp() / term.rate.re
        })
    }

    pub fn left_mul(&self, a: &CMat<T>) -> Self {
        Self {
            rows: a.nrows(),
            cols: self.cols,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: a * &t.coeff, rate: t.rate })
                .collect(),
        }
    }

    pub fn right_mul(&self, b: &CMat<T>) -> Self {
        Self {
            rows: self.rows,
            cols: b.ncols(),
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: &t.coeff * b, rate: t.rate })
                .collect(),
        }
    }

    pub fn scaled(&self, s: Cplx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: matrix::scale(&t.coeff, s), rate: t.rate })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("adding exponential sums of different shape".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { rows: self.rows, cols: self.cols, terms })
    }

    /// Pointwise conjugate transpose with conjugated rates: the mirror image of
    /// the adjoint flip `g*(t) = g(-t)^*`.
    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: t.coeff.adjoint(), rate: t.rate.conj() })
                .collect(),
        }
    }

    /// Entrywise restriction `g_{i,j}`.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        Self {
            rows: 1,
            cols: 1,
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm { coeff: CMat::from_element(1, 1, t.coeff[(i, j)]), rate: t.rate })
                .collect(),
        }
    }

    /// Causal convolution by partial fractions:
    /// `C e^{-at} * B e^{-bt} = CB (e^{-bt} - e^{-at}) / (a - b)`.
    /// Returns `None` when two poles collide (within [`POLE_COLLISION`]).
    pub fn convolve(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut terms = Vec::with_capacity(2 * self.terms.len() * other.terms.len());
        for f in &self.terms {
            for g in &other.terms {
                let diff = f.rate - g.rate;
                if cabs(diff).as_f64() < POLE_COLLISION {
                    return None;
                }
                let prod = matrix::scale(&(&f.coeff * &g.coeff), cinv(diff));
                terms.push(ExpTerm { coeff: prod.clone(), rate: g.rate });
                terms.push(ExpTerm { coeff: -prod, rate: f.rate });
            }
        }
        Some(Self { rows: self.rows, cols: other.cols, terms })
    }

    /// Sum of numerical ranks of the coefficients: the rank of the Hankel
    /// operator generated by this kernel.
    pub fn hankel_rank(&self) -> usize {
        self.terms
            .iter()
            .map(|t| {
                let sv = matrix::singular_values(&t.coeff);
                let top = sv.first().copied().unwrap_or_else(T::zero);
                sv.iter().filter(|s| **s > top * T::lit(1e-12)).count()
            })
            .sum()
    }

    pub fn min_decay(&self) -> Option<T> {
        self.terms.iter().map(|t| t.rate.re).reduce(|a, b| a.min(b))
    }

    pub fn max_rate_modulus(&self) -> Option<T> {
        self.terms.iter().map(|t| cabs(t.rate)).reduce(|a, b| a.max(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;

    fn scalar_exp(c: f64, a: f64) -> ExpSum<f64> {
        ExpSum::single(from_real_rows(&[&[c]]), cplx(a, 0.0)).unwrap()
    }

    #[test]
    fn rejects_non_decaying_rates() {
        let r = ExpSum::single(from_real_rows::<f64>(&[&[1.0]]), cplx(0.0, 1.0));
        assert!(matches!(r, Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn partial_fraction_convolution_matches_closed_form() {
        // e^{-t} * e^{-2t} = e^{-t} - e^{-2t}
        let c = scalar_exp(1.0, 1.0).convolve(&scalar_exp(1.0, 2.0)).unwrap();
        for &t in &[0.0, 0.3, 1.0, 4.0] {
            let expect = (-t as f64).exp() - (-2.0 * t as f64).exp();
            assert!((c.eval(t)[(0, 0)].re - expect).abs() < 1e-14);
        }
        assert!(scalar_exp(1.0, 1.0).convolve(&scalar_exp(3.0, 1.0)).is_none());
    }

    #[test]
    fn hankel_rank_counts_coefficient_ranks() {
        let a = ExpSum::<f64>::new(
            2,
            2,
            vec![
                ExpTerm { coeff: from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]), rate: cplx(1.0, 0.0) },
                ExpTerm { coeff: from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]), rate: cplx(2.0, 1.0) },
            ],
        )
        .unwrap();
        assert_eq!(a.hankel_rank(), 3);
    }
}
