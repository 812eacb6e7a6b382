//! Solves with Hermitian positive definite operators.

use super::operator::DiscretizedOperator;
use super::spectrum::{dot, norm};
use crate::error::{Error, Result};
use crate::scalar::{CMat, Cplx, Real};
use nalgebra::Cholesky;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    /// Dense Cholesky when the operator is small, conjugate gradient otherwise.
    Auto,
    DenseCholesky,
    ConjugateGradient,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpdSolveConfig {
    pub method: SolveMethod,
    pub rtol: f64,
    pub max_iterations: usize,
}

impl Default for SpdSolveConfig {
    fn default() -> Self {
        Self { method: SolveMethod::Auto, rtol: 1e-10, max_iterations: 5000 }
    }
}

impl SpdSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol < 1.0) {
            return Err(Error::InvalidParameter(format!("solver tolerance {} outside (0, 1)", self.rtol)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("solver needs at least one iteration".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SpdSolution<T: Real> {
    pub x: CMat<T>,
    /// Largest `||A x - b|| / ||b||` over the columns.
    pub residual: T,
    pub iterations: usize,
}

/// Solves `A X = B` column by column for Hermitian positive definite `A`.
pub fn spd_solve<T: Real>(op: &DiscretizedOperator<T>, rhs: &CMat<T>, cfg: &SpdSolveConfig) -> Result<SpdSolution<T>> {
    cfg.validate()?;
    if op.nrows() != op.ncols() || rhs.nrows() != op.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} with right-hand side of {} rows",
            op.nrows(),
            op.ncols(),
            rhs.nrows()
        )));
    }
    let dense = match cfg.method {
        SolveMethod::Auto => op.is_small(),
        SolveMethod::DenseCholesky => true,
        SolveMethod::ConjugateGradient => false,
    };
    if dense {
        dense_solve(op, rhs)
    } else {
        let mut x = CMat::zeros(rhs.nrows(), rhs.ncols());
        let mut residual = T::zero();
        let mut iterations = 0;
        for c in 0..rhs.ncols() {
            let (xc, res, it) = conjugate_gradient(op, rhs.column(c).as_slice(), cfg)?;
            x.column_mut(c).copy_from_slice(&xc);
            residual = residual.max(res);
            iterations = iterations.max(it);
        }
        Ok(SpdSolution { x, residual, iterations })
    }
}

fn dense_solve<T: Real>(op: &DiscretizedOperator<T>, rhs: &CMat<T>) -> Result<SpdSolution<T>> {
    let a = crate::matrix::hermitize(&op.to_dense());
    let chol = Cholesky::new(a.clone()).ok_or(Error::NotPositiveDefinite)?;
    // complex square roots never fail, so positivity is checked on the factor
    let l = chol.l_dirty();
    for i in 0..l.nrows() {
        let d = l[(i, i)];
        if !(d.re > T::zero()) || d.im.abs() > T::lit(1e-12) * d.re {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let x = chol.solve(rhs);
    let r = &a * &x - rhs;
    let mut residual = T::zero();
    for c in 0..rhs.ncols() {
        let b = rhs.column(c).norm();
        if b > T::zero() {
            residual = residual.max(r.column(c).norm() / b);
        }
    }
    if !residual.is_finite_value() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(SpdSolution { x, residual, iterations: 1 })
}

fn conjugate_gradient<T: Real>(
    op: &DiscretizedOperator<T>,
    b: &[Cplx<T>],
    cfg: &SpdSolveConfig,
) -> Result<(Vec<Cplx<T>>, T, usize)> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let bnorm = norm(b);
    let mut x = vec![zero; n];
    if bnorm == T::zero() {
        return Ok((x, T::zero(), 0));
    }
    let tol = T::lit(cfg.rtol) * bnorm;
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re;
    for it in 1..=cfg.max_iterations {
        let ap = op.apply(&p);
        let pap = dot(&p, &ap).re;
        if !(pap > T::zero()) {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = Complex::new(rr / pap, T::zero());
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r).re;
        if rr_new.sqrt() <= tol {
            // confirm with the true residual
            let ax = op.apply(&x);
            let res = norm(&ax.iter().zip(b).map(|(a, bb)| *a - *bb).collect::<Vec<_>>()) / bnorm;
            if res <= T::lit(cfg.rtol) * T::lit(10.0) {
                return Ok((x, res, it));
            }
            r = b.iter().zip(&ax).map(|(bb, a)| *bb - *a).collect();
            p = r.clone();
            rr = dot(&r, &r).re;
            continue;
        }
        let beta = Complex::new(rr_new / rr, T::zero());
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    Err(Error::NoConvergence { iterations: cfg.max_iterations, residual: (rr.sqrt() / bnorm).as_f64() })
}
