use super::certify::{certify_right_invertible, CertifyConfig, Certification};
use super::pointers::{right_pointers, Pointers};
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::halfline::build::{build_tg_tgstar, columns_to_kernel, kernel_columns, wiener_hopf_named};
use crate::halfline::spd_solve;
use crate::kernels::{CausalKernel, SPoint, Samples, WienerPlusFunction};
use crate::matrix;
use crate::scalar::{CMat, Real};
use serde::{Deserialize, Serialize};

/// Largest condition number accepted when inverting `Y(s)`.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub certify: CertifyConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub lambda_min: f64,
    pub route_a: bool,
    pub route_b: bool,
    pub lambda_tr: f64,
    pub lambda_schur: Option<f64>,
    /// Largest relative residual of the normal-equation solves.
    pub solver_residual: f64,
    pub solver_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct YComputation<T: Real> {
    pub y: CausalKernel<T>,
    pub residual: T,
    pub iterations: usize,
}

/// `y = T_G* (T_G T_G*)^{-1} g`, one solve per column of `g`, sampled at the
/// cell midpoints of `grid`.
pub fn compute_y<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, cfg: &SolverConfig) -> Result<YComputation<T>> {
    let p = g.cols();
    if g.kernel().is_zero() {
        let zero = CausalKernel::from_parts(
            Samples::zero(*grid, Placement::Cells, p, p),
            crate::kernels::ExpSum::zero(p, p),
        )?;
        return Ok(YComputation { y: zero, residual: T::zero(), iterations: 0 });
    }
    let tg = wiener_hopf_named(g, grid, "T_G")?;
    let tt = build_tg_tgstar(&tg)?;
    let rhs = kernel_columns(g.kernel(), grid);
    let sol = spd_solve(&tt, &rhs, &cfg.certify.solve)?;
    let limit = T::lit(10.0 * cfg.certify.solve.rtol).max(T::lit(1e-8));
    if !(sol.residual <= limit) {
        return Err(Error::ResidualTooLarge { residual: sol.residual.as_f64(), tolerance: limit.as_f64() });
    }
    let ycols = tg.adjoint().apply_columns(&sol.x);
    let y = columns_to_kernel(&ycols, p, grid)?;
    Ok(YComputation { y, residual: sol.residual, iterations: sol.iterations })
}

/// Everything the pipeline constructs for one problem.
#[derive(Clone, Debug)]
pub struct BezoutSolution<T: Real> {
    pub grid: TimeGrid<T>,
    pub g: WienerPlusFunction<T>,
    pub pointers: Pointers<T>,
    pub y: CausalKernel<T>,
    /// `Y = I_p - y^`.
    pub big_y: WienerPlusFunction<T>,
    /// `Xi = Y D+`.
    pub xi: WienerPlusFunction<T>,
    /// `Theta = Y E`.
    pub theta: WienerPlusFunction<T>,
    pub diagnostics: SolverDiagnostics,
}

impl<T: Real> BezoutSolution<T> {
    pub fn m(&self) -> usize {
        self.g.rows()
    }

    pub fn p(&self) -> usize {
        self.g.cols()
    }

    pub fn d(&self) -> &CMat<T> {
        self.g.constant()
    }

    pub fn is_square(&self) -> bool {
        self.m() == self.p()
    }

    /// `Y(s)^{-1}`, rejecting near-singular values.
    pub fn eval_y_inverse(&self, s: SPoint<T>) -> Result<CMat<T>> {
        matrix::inverse_checked(&self.big_y.eval(s)?, MAX_CONDITION)
    }
}

pub fn assemble<T: Real>(
    g: &WienerPlusFunction<T>,
    y: CausalKernel<T>,
    pointers: Pointers<T>,
    grid: TimeGrid<T>,
    diagnostics: SolverDiagnostics,
) -> Result<BezoutSolution<T>> {
    let p = g.cols();
    if (y.rows(), y.cols()) != (p, p) {
        return Err(Error::DimensionMismatch(format!("y must be {p}x{p}")));
    }
    let big_y = WienerPlusFunction::new(matrix::identity(p), y.neg())?;
    let xi = big_y.right_mul(&pointers.d_plus)?;
    let theta = big_y.right_mul(&pointers.e)?;
    Ok(BezoutSolution { grid, g: g.clone(), pointers, y, big_y, xi, theta, diagnostics })
}

/// Certification, pointers, `y` and assembly.
pub fn solve<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, cfg: &SolverConfig) -> Result<BezoutSolution<T>> {
    let cert = certify(g, grid, cfg)?;
    let pointers = right_pointers(g.constant())?;
    let yc = compute_y(g, grid, cfg)?;
    let diagnostics = SolverDiagnostics {
        lambda_min: cert.lambda_min,
        route_a: cert.route_a,
        route_b: cert.route_b,
        lambda_tr: cert.lambda_tr,
        lambda_schur: cert.lambda_schur,
        solver_residual: yc.residual.as_f64(),
        solver_iterations: yc.iterations,
    };
    assemble(g, yc.y, pointers, *grid, diagnostics)
}

/// Certification that fails with [`Error::NotRightInvertible`] when both
/// routes reject.
pub fn certify<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, cfg: &SolverConfig) -> Result<Certification> {
    let cert = certify_right_invertible(g, grid, &cfg.certify)?;
    if !cert.route_a {
        return Err(Error::NotRightInvertible {
            lambda_min: cert.lambda_min,
            threshold: cfg.certify.threshold * cert.norm_tgtg,
        });
    }
    Ok(cert)
}
