//! Right invertibility of `T_G` by two routes: strict positivity of
//! `T_G T_G*`, and invertibility of `T_R` together with the Schur complement
//! `I - H_G* T_R^{-1} H_G`.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::halfline::build::{build_hankel, build_tg_tgstar, build_tr, wiener_hopf_named};
use crate::halfline::{extreme_eigenvalues, range_finder, spd_solve, DiscretizedOperator, SpdSolveConfig};
use crate::kernels::WienerPlusFunction;
use crate::matrix;
use crate::scalar::{CMat, Real};
use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    /// Positivity threshold relative to the operator norm.
    pub threshold: f64,
    pub solve: SpdSolveConfig,
    /// Relative tolerance of the Hankel range finder.
    pub lowrank_tol: f64,
    pub max_rank: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self { threshold: 1e-8, solve: SpdSolveConfig::default(), lowrank_tol: 1e-14, max_rank: 240 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    /// Infimum of the spectrum of `T_G T_G*`: the discrete minimum capped by
    /// `sigma_min(D)^2`, the value of the symbol at infinity.
    pub lambda_min: f64,
    pub lambda_min_discrete: f64,
    pub norm_tgtg: f64,
    pub lambda_tr: f64,
    pub norm_tr: f64,
    /// Smallest eigenvalue of `I - H_G* T_R^{-1} H_G`; absent when `T_R`
    /// itself fails.
    pub lambda_schur: Option<f64>,
    pub hankel_rank: usize,
    pub route_a: bool,
    pub route_b: bool,
}

/// Low-rank factorization of `H_G ~ Q B` together with `P = T_R^{-1} Q`,
/// `M = Q* P` and `C = B B*`.
pub struct SchurFactors<T: Real> {
    pub q: CMat<T>,
    pub b: CMat<T>,
    pub p: CMat<T>,
    pub m: CMat<T>,
    pub c: CMat<T>,
}

impl<T: Real> SchurFactors<T> {
    pub fn new(tr: &DiscretizedOperator<T>, hg: &DiscretizedOperator<T>, cfg: &CertifyConfig) -> Result<Self> {
        let lr = range_finder(hg, T::lit(cfg.lowrank_tol), cfg.max_rank);
        let p = if lr.rank() == 0 {
            CMat::zeros(tr.nrows(), 0)
        } else {
            spd_solve(tr, &lr.q, &cfg.solve)?.x
        };
        let m = matrix::hermitize(&(lr.q.adjoint() * &p));
        let c = matrix::hermitize(&(&lr.b * lr.b.adjoint()));
        Ok(Self { q: lr.q, b: lr.b, p, m, c })
    }

    pub fn rank(&self) -> usize {
        self.q.ncols()
    }

    /// `lambda_min(I - H* T_R^{-1} H) = 1 - lambda_max(L* C L)` with `M = L L*`.
    pub fn schur_min_eigenvalue(&self) -> Result<T> {
        if self.rank() == 0 {
            return Ok(T::one());
        }
        let chol = Cholesky::new(self.m.clone()).ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l();
        let k = matrix::hermitize(&(l.adjoint() * &self.c * &l));
        let ev = matrix::hermitian_eigenvalues(&k);
        Ok(T::one() - ev[ev.len() - 1])
    }
}

pub fn certify_right_invertible<T: Real>(
    g: &WienerPlusFunction<T>,
    grid: &TimeGrid<T>,
    cfg: &CertifyConfig,
) -> Result<Certification> {
    let (m, p) = (g.rows(), g.cols());
    if m > p {
        return Err(Error::DimensionMismatch(format!("G is {m}x{p}; need m <= p")));
    }
    let sigma_sq = if m == 0 {
        T::one()
    } else {
        let sv = matrix::singular_values(g.constant());
        sv[m - 1] * sv[m - 1]
    };
    let thr = T::lit(cfg.threshold);

    let tg = wiener_hopf_named(g, grid, "T_G")?;
    let tt = build_tg_tgstar(&tg)?;
    let ea = extreme_eigenvalues(&tt)?;
    let lambda_a = ea.min.min(sigma_sq);
    let route_a = lambda_a > thr * ea.max;

    let tr = build_tr(g, grid)?;
    let eb = extreme_eigenvalues(&tr)?;
    let lambda_tr = eb.min.min(sigma_sq);
    let (lambda_schur, hankel_rank) = if lambda_tr > thr * eb.max {
        let hg = build_hankel(g.kernel(), grid)?;
        let f = SchurFactors::new(&tr, &hg, cfg)?;
        (Some(f.schur_min_eigenvalue()?), f.rank())
    } else {
        (None, 0)
    };
    let route_b = lambda_tr > thr * eb.max && lambda_schur.is_some_and(|s| s > thr);
    if route_a != route_b {
        return Err(Error::RouteDisagreement {
            route_a,
            route_b,
            lambda_a: lambda_a.as_f64(),
            lambda_tr: lambda_tr.as_f64(),
            lambda_schur: lambda_schur.map_or(f64::NAN, |v| v.as_f64()),
        });
    }
    Ok(Certification {
        lambda_min: lambda_a.as_f64(),
        lambda_min_discrete: ea.min.as_f64(),
        norm_tgtg: ea.max.as_f64(),
        lambda_tr: lambda_tr.as_f64(),
        norm_tr: eb.max.as_f64(),
        lambda_schur: lambda_schur.map(|v| v.as_f64()),
        hankel_rank,
        route_a,
        route_b,
    })
}
