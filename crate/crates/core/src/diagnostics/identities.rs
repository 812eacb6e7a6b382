//! Pointwise identities on the imaginary axis (and at infinity).

use super::report::{CheckId, ReportEntry};
use super::winding::winding_det_y;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::kernels::{SPoint, WienerPlusFunction};
use crate::matrix::{self, identity};
use crate::scalar::{CMat, Real};
use crate::solver::pipeline::MAX_CONDITION;
use crate::solver::BezoutSolution;
use rayon::prelude::*;

/// Tolerance for identities that hold exactly up to rounding.
pub const ALGEBRAIC_TOL: f64 = 1e-10;
/// Smallest `|det Y(i w)|` accepted as nonvanishing.
pub const DET_TOL: f64 = 1e-8;

/// Values of `f` at every grid frequency.
pub fn eval_on_grid<T: Real>(f: &WienerPlusFunction<T>, freq: &FrequencyGrid<T>) -> Result<Vec<CMat<T>>> {
    freq.omegas().par_iter().map(|w| f.eval_axis(*w)).collect()
}

/// `max ||F(s)|| ` over infinity and the grid for a pointwise residual `F`.
fn max_over_axis<T: Real>(
    freq: &FrequencyGrid<T>,
    f: impl Fn(SPoint<T>) -> Result<CMat<T>> + Sync,
) -> Result<f64> {
    let at_inf = matrix::spectral_norm(&f(SPoint::Infinity)?).as_f64();
    let vals: Vec<f64> = freq
        .omegas()
        .par_iter()
        .map(|w| Ok(matrix::spectral_norm(&f(SPoint::axis(*w))?).as_f64()))
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(at_inf, f64::max))
}

/// `max ||G(i w) X(i w) - I_m||`.
pub fn residual_bezout<T: Real>(
    g: &WienerPlusFunction<T>,
    x: &WienerPlusFunction<T>,
    freq: &FrequencyGrid<T>,
    tol: f64,
) -> Result<ReportEntry> {
    if g.cols() != x.rows() || x.cols() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "G is {}x{}, X is {}x{}",
            g.rows(),
            g.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let id = identity::<T>(g.rows());
    let r = max_over_axis(freq, |s| Ok(g.eval(s)? * x.eval(s)? - &id))?;
    Ok(ReportEntry::new(CheckId::Bezout, r, tol))
}

/// `max ||G(i w) Y(i w) - D||`.
pub fn residual_gy<T: Real>(
    g: &WienerPlusFunction<T>,
    big_y: &WienerPlusFunction<T>,
    freq: &FrequencyGrid<T>,
    tol: f64,
) -> Result<ReportEntry> {
    if g.cols() != big_y.rows() || big_y.cols() != g.cols() {
        return Err(Error::DimensionMismatch("Y must be p x p".into()));
    }
    let d = g.constant().clone();
    let r = max_over_axis(freq, |s| Ok(g.eval(s)? * big_y.eval(s)? - &d))?;
    Ok(ReportEntry::new(CheckId::GyEqualsD, r, tol))
}

/// `max ||Theta(i w)* Theta(i w) - I||`, including the value at infinity.
pub fn residual_inner<T: Real>(theta: &WienerPlusFunction<T>, freq: &FrequencyGrid<T>, tol: f64) -> Result<ReportEntry> {
    if theta.cols() == 0 {
        return Ok(ReportEntry::new(CheckId::Inner, 0.0, tol).note("square case: Theta is empty"));
    }
    let id = identity::<T>(theta.cols());
    let c = theta.constant();
    let at_inf = matrix::spectral_norm(&(c.adjoint() * c - &id)).as_f64();
    let r = max_over_axis(freq, |s| {
        let v = theta.eval(s)?;
        Ok(v.adjoint() * v - &id)
    })?;
    Ok(ReportEntry::new(CheckId::Inner, r, tol).metric("at_infinity", at_inf))
}

/// `max ||[G; E* Y^{-1}] Y [D+, E] - I_p||`, together with the algebraic
/// identity `Y [D+, E] = [Xi, Theta]`, which must hold to rounding.
pub fn residual_tolokonnikov<T: Real>(sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>, tol: f64) -> Result<ReportEntry> {
    let (m, p) = (sol.m(), sol.p());
    let ptr = &sol.pointers;
    let mut right_const = CMat::zeros(p, p);
    right_const.columns_mut(0, m).copy_from(&ptr.d_plus);
    right_const.columns_mut(m, p - m).copy_from(&ptr.e);
    let id = identity::<T>(p);
    let eval = |s: SPoint<T>| -> Result<(f64, f64)> {
        let yv = sol.big_y.eval(s)?;
        let yinv = matrix::inverse_checked(&yv, MAX_CONDITION)?;
        let mut left = CMat::zeros(p, p);
        left.rows_mut(0, m).copy_from(&sol.g.eval(s)?);
        left.rows_mut(m, p - m).copy_from(&(ptr.e.adjoint() * yinv));
        let right = &yv * &right_const;
        let mut xt = CMat::zeros(p, p);
        xt.columns_mut(0, m).copy_from(&sol.xi.eval(s)?);
        xt.columns_mut(m, p - m).copy_from(&sol.theta.eval(s)?);
        let scale = matrix::spectral_norm(&yv).max(T::one());
        Ok((
            matrix::spectral_norm(&(left * &right - &id)).as_f64(),
            (matrix::spectral_norm(&(right - xt)) / scale).as_f64(),
        ))
    };
    let mut points = vec![SPoint::Infinity];
    points.extend(freq.omegas().iter().map(|w| SPoint::axis(*w)));
    let vals: Vec<(f64, f64)> = points.par_iter().map(|s| eval(*s)).collect::<Result<_>>()?;
    let (r, alg) = vals.into_iter().fold((0.0f64, 0.0f64), |(a, b), (x, y)| (a.max(x), b.max(y)));
    Ok(ReportEntry::new(CheckId::Tolokonnikov, r, tol)
        .metric("algebraic", alg)
        .require(alg <= ALGEBRAIC_TOL))
}

/// Winding of `det Y` must be zero with `|det Y|` bounded away from zero on a
/// grid fine enough to track the phase.
pub fn winding_check<T: Real>(big_y: &WienerPlusFunction<T>, freq: &FrequencyGrid<T>) -> Result<ReportEntry> {
    let w = winding_det_y(big_y, freq)?;
    let mut e = ReportEntry::new(CheckId::Winding, w.winding.unsigned_abs() as f64, 0.0)
        .metric("min_abs_det", w.min_abs_det)
        .metric("max_phase_step", w.max_phase_step)
        .require(w.reliable && w.min_abs_det > DET_TOL);
    if !w.reliable {
        e = e.note("phase steps too large: frequency grid too coarse");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::kernels::{CausalKernel, ExpSum};
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;
    use crate::solver::{right_pointers, solve, SolverConfig};

    fn freq() -> FrequencyGrid<f64> {
        FrequencyGrid::uniform(50.0, 2001).unwrap()
    }

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    #[test]
    fn constant_bezout_is_exact() {
        let g = WienerPlusFunction::constant_only(from_real_rows(&[&[1.0, 0.0]]));
        let x = WienerPlusFunction::constant_only(from_real_rows(&[&[1.0], &[0.0]]));
        let e = residual_bezout(&g, &x, &freq(), 1e-3).unwrap();
        assert_eq!(e.residual, 0.0);
        assert!(e.pass);
    }

    #[test]
    fn zero_is_not_a_solution() {
        let x = WienerPlusFunction::constant_only(from_real_rows(&[&[0.0], &[0.0]]));
        let e = residual_bezout(&g0(), &x, &freq(), 1e-3).unwrap();
        assert!((e.residual - 1.0).abs() < 1e-15);
        assert!(!e.pass);
        let bad = WienerPlusFunction::constant_only(from_real_rows(&[&[0.0, 0.0]]));
        assert!(residual_bezout(&g0(), &bad, &freq(), 1e-3).is_err());
    }

    #[test]
    fn inner_constant_and_scaled() {
        let e = WienerPlusFunction::constant_only(from_real_rows(&[&[0.0], &[1.0]]));
        assert_eq!(residual_inner(&e, &freq(), 1e-3).unwrap().residual, 0.0);
        let twice = WienerPlusFunction::constant_only(from_real_rows(&[&[0.0], &[2.0]]));
        let r = residual_inner(&twice, &freq(), 1e-3).unwrap();
        assert!((r.residual - 3.0).abs() < 1e-14);
        assert!(!r.pass);
    }

    #[test]
    fn g0_identities() {
        let grid = TimeGrid::from_horizon(0.02, 30.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let f = freq();
        for e in [
            residual_bezout(&sol.g, &sol.xi, &f, 1e-3).unwrap(),
            residual_gy(&sol.g, &sol.big_y, &f, 1e-3).unwrap(),
            residual_inner(&sol.theta, &f, 1e-3).unwrap(),
            residual_tolokonnikov(&sol, &f, 1e-3).unwrap(),
            winding_check(&sol.big_y, &f).unwrap(),
        ] {
            assert!(e.pass, "{e:?}");
        }
        let w = winding_check(&sol.big_y, &f).unwrap();
        assert!((w.metrics["min_abs_det"] - 0.5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn zero_kernel_tolokonnikov_is_exact() {
        let grid = TimeGrid::from_horizon(0.1, 5.0).unwrap();
        let g = WienerPlusFunction::constant_only(from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0]]));
        let sol = solve::<f64>(&g, &grid, &SolverConfig::default()).unwrap();
        let e = residual_tolokonnikov(&sol, &freq(), 1e-3).unwrap();
        assert!(e.residual < 1e-14, "{e:?}");
    }

    #[test]
    fn non_isometric_e_fails() {
        let grid = TimeGrid::from_horizon(0.05, 20.0).unwrap();
        let mut sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let mut ptr = right_pointers(sol.g.constant()).unwrap();
        ptr.e *= cplx::<f64>(1.2, 0.0);
        sol = crate::solver::assemble(&sol.g, sol.y.clone(), ptr, grid, sol.diagnostics).unwrap();
        let f = freq();
        let tol = residual_tolokonnikov(&sol, &f, 1e-3).unwrap();
        assert!(!tol.pass && tol.residual >= 0.2, "{tol:?}");
        let inner = residual_inner(&sol.theta, &f, 1e-3).unwrap();
        assert!(!inner.pass);
    }

    #[test]
    fn right_half_plane_zero_fails_winding() {
        // Y = diag(1, (s - 1)/(s + sqrt 2)) = I + kernel -(1 + sqrt 2) e^{-sqrt 2 t} in the (2,2) slot
        let r2 = 2f64.sqrt();
        let k = ExpSum::single(from_real_rows(&[&[0.0, 0.0], &[0.0, -(1.0 + r2)]]), cplx(r2, 0.0)).unwrap();
        let y = WienerPlusFunction::new(identity::<f64>(2), CausalKernel::from_expsum(k)).unwrap();
        let e = winding_check(&y, &freq()).unwrap();
        assert_eq!(e.residual, 1.0);
        assert!(!e.pass);
    }
}
