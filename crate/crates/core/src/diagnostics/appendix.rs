//! Operator-level properties: the decomposition of `T_R`, norm bounds by
//! `kappa`, Hankel rank, the Schur route and decay of `T_R^{-1}` solutions.

use super::report::{CheckId, ReportEntry};
use crate::error::Result;
use crate::grid::{Placement, TimeGrid};
use crate::halfline::build::{build_hankel, build_tr, wiener_hopf_named};
use crate::halfline::{decomposition_residual, range_finder, spd_solve, spectral_norm, SpdSolveConfig};
use crate::kernels::WienerPlusFunction;
use crate::matrix;
use crate::oracle::schur::{relative_sample_difference, schur_path_y};
use crate::scalar::{CMat, Real};
use crate::solver::{BezoutSolution, CertifyConfig};
use num_complex::Complex;

/// Slack allowed on top of `kappa` for the discretized norms.
pub const KAPPA_SLACK: f64 = 1.05;
/// Bound on `sigma_{r+1} / sigma_1` for a rank-`r` exponential sum.
pub const HANKEL_RANK_TOL: f64 = 1e-8;
/// Agreement required between the Schur path and the direct solve.
pub const SCHUR_PATH_TOL: f64 = 1e-6;

/// Relative Frobenius size of `T_R - T_G T_G* - H_G H_G*`.
pub fn decomposition_check<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, tol: f64) -> Result<ReportEntry> {
    let d = decomposition_residual(g, grid)?;
    let mut e = ReportEntry::new(CheckId::Decomposition, d.relative_frobenius.as_f64(), tol)
        .metric("frobenius", d.frobenius.as_f64())
        .metric("spectral", d.spectral.as_f64());
    if d.estimated {
        e = e.note("Frobenius norms estimated with random probes");
    }
    Ok(e)
}

/// `max(||W||, ||H||) / kappa` with `W` the Wiener-Hopf operator of the kernel
/// alone; passes when at most [`KAPPA_SLACK`].
pub fn kappa_bounds<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>) -> Result<ReportEntry> {
    let kappa = g.kernel().norms().kappa.as_f64();
    let w = WienerPlusFunction::new(CMat::zeros(g.rows(), g.cols()), g.kernel().clone())?;
    let nw = spectral_norm(&wiener_hopf_named(&w, grid, "W")?)?.as_f64();
    let nh = spectral_norm(&build_hankel(g.kernel(), grid)?)?.as_f64();
    let top = nw.max(nh);
    let residual = if kappa > 0.0 { top / kappa } else if top == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(ReportEntry::new(CheckId::KappaBounds, residual, KAPPA_SLACK)
        .metric("kappa", kappa)
        .metric("norm_w", nw)
        .metric("norm_h", nh))
}

/// `sigma_{r+1}(H_G) / sigma_1(H_G)` where `r` is the Hankel rank of the
/// exponential-sum form of the kernel.
pub fn hankel_rank_check<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>) -> Result<ReportEntry> {
    let Some(e) = g.kernel().expsum() else {
        return Ok(ReportEntry::new(CheckId::HankelRank, 0.0, HANKEL_RANK_TOL).note("kernel has no exponential-sum form"));
    };
    let r = e.hankel_rank();
    let h = build_hankel(g.kernel(), grid)?;
    let sv: Vec<f64> = if h.is_small() {
        matrix::singular_values(&h.to_dense()).iter().map(|s| s.as_f64()).collect()
    } else {
        let lr = range_finder(&h, T::lit(1e-14), r + 10);
        if lr.rank() == 0 {
            Vec::new()
        } else {
            matrix::singular_values(&lr.b).iter().map(|s| s.as_f64()).collect()
        }
    };
    let top = sv.first().copied().unwrap_or(0.0);
    let next = sv.get(r).copied().unwrap_or(0.0);
    let ratio = if top > 0.0 { next / top } else { 0.0 };
    Ok(ReportEntry::new(CheckId::HankelRank, ratio, HANKEL_RANK_TOL)
        .metric("rank", r as f64)
        .metric("sigma_1", top)
        .metric("sigma_r_plus_1", next))
}

/// Schur-path `y` against the stored `y`, plus consistency of the Schur
/// complement's invertibility with the stored route-B verdict.
pub fn schur_route_check<T: Real>(sol: &BezoutSolution<T>, cfg: &CertifyConfig) -> Result<ReportEntry> {
    let path = schur_path_y(&sol.g, &sol.grid, cfg)?;
    let lambda = path.lambda_schur.as_f64();
    let rel = match relative_sample_difference(&path.y, &sol.y) {
        Some(r) => r.as_f64(),
        None if sol.y.is_zero() && path.y.is_zero() => 0.0,
        None => {
            let stored = sol.y.samples().map(|s| s.resample(sol.grid, Placement::Cells));
            match stored {
                Some(s) => relative_sample_difference(&path.y, &crate::kernels::CausalKernel::from_samples(s))
                    .map_or(f64::INFINITY, |r| r.as_f64()),
                None => f64::INFINITY,
            }
        }
    };
    let invertible = lambda > cfg.threshold;
    let consistent = invertible == sol.diagnostics.route_b;
    Ok(ReportEntry::new(CheckId::SchurRoute, rel, SCHUR_PATH_TOL)
        .metric("lambda_schur", lambda)
        .metric("hankel_rank", path.hankel_rank as f64)
        .require(consistent && lambda <= 1.0 + 1e-12))
}

/// Decay of `x = T_R^{-1} b` for `b = e^{-t} 1_{t < cutoff}` in every
/// component: discrete `l1`, `l2` and the mass on `[T/2, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailMass {
    pub l1: f64,
    pub l2: f64,
    pub tail: f64,
    pub ratio: f64,
}

pub fn tr_tail_mass<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, cutoff: T) -> Result<TailMass> {
    let m = g.rows();
    let n = grid.count();
    let tr = build_tr(g, grid)?;
    let mut b = CMat::zeros(m * n, 1);
    for j in 0..n {
        let t = grid.time(Placement::Cells, j);
        if t < cutoff {
            for r in 0..m {
                b[(j * m + r, 0)] = Complex::new((-t).exp(), T::zero());
            }
        }
    }
    let x = spd_solve(&tr, &b, &SpdSolveConfig::default())?.x;
    let h = grid.step().as_f64();
    let half = grid.horizon() * T::lit(0.5);
    let (mut l1, mut l2, mut tail) = (0.0, 0.0, 0.0);
    for j in 0..n {
        let v: f64 = (0..m).map(|r| x[(j * m + r, 0)].norm_sqr().as_f64()).sum();
        l1 += v.sqrt() * h;
        l2 += v * h;
        if grid.time(Placement::Cells, j) >= half {
            tail += v.sqrt() * h;
        }
    }
    Ok(TailMass { l1, l2: l2.sqrt(), tail, ratio: if l1 > 0.0 { tail / l1 } else { 0.0 } })
}
