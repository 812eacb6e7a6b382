use super::pipeline::BezoutSolution;
use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, Placement};
use crate::kernels::{SPoint, WienerPlusFunction};
use crate::matrix;
use crate::scalar::{CMat, Real};

/// Free parameter `Z` of size `(p - m) x m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionParameter<T: Real> {
    z: WienerPlusFunction<T>,
}

impl<T: Real> SolutionParameter<T> {
    pub fn new(z: WienerPlusFunction<T>) -> Self {
        Self { z }
    }

    /// The only parameter of the square case.
    pub fn empty(m: usize) -> Self {
        Self { z: WienerPlusFunction::constant_only(CMat::zeros(0, m)) }
    }

    pub fn function(&self) -> &WienerPlusFunction<T> {
        &self.z
    }

    pub fn strictly_proper(&self) -> bool {
        self.z.is_strictly_proper()
    }
}

/// `X = Xi + Theta Z`.
pub fn parametrize<T: Real>(sol: &BezoutSolution<T>, z: &SolutionParameter<T>) -> Result<WienerPlusFunction<T>> {
    let (m, p) = (sol.m(), sol.p());
    let zf = z.function();
    if (zf.rows(), zf.cols()) != (p - m, m) {
        return Err(Error::DimensionMismatch(format!(
            "parameter must be {}x{m}, got {}x{}",
            p - m,
            zf.rows(),
            zf.cols()
        )));
    }
    if p == m {
        return Ok(sol.xi.clone());
    }
    let tz = sol.theta.mul(zf, sol.grid, Placement::Cells)?;
    sol.xi.add(&tz)
}

/// Parameter values `Z(i w)` recovered on a frequency grid.
#[derive(Clone, Debug)]
pub struct RecoveredParameter<T: Real> {
    pub omegas: Vec<T>,
    pub values: Vec<CMat<T>>,
    /// Bezout residual of the supplied `X` on the grid.
    pub residual: T,
}

/// `Z(i w) = E* Y(i w)^{-1} (X(i w) - Xi(i w))`, after checking that `X`
/// solves `G X = I` on the grid within `tolerance`.
pub fn recover_parameter<T: Real>(
    sol: &BezoutSolution<T>,
    x: &WienerPlusFunction<T>,
    freq: &FrequencyGrid<T>,
    tolerance: T,
) -> Result<RecoveredParameter<T>> {
    let (m, p) = (sol.m(), sol.p());
    if (x.rows(), x.cols()) != (p, m) {
        return Err(Error::DimensionMismatch(format!("X must be {p}x{m}")));
    }
    let ident = matrix::identity::<T>(m);
    let mut residual = matrix::spectral_norm(&(sol.d() * x.constant() - &ident));
    let mut values = Vec::with_capacity(freq.len());
    for &w in freq.omegas() {
        let s = SPoint::axis(w);
        let xv = x.eval(s)?;
        let gv = sol.g.eval(s)?;
        residual = residual.max(matrix::spectral_norm(&(&gv * &xv - &ident)));
        let yinv = sol.eval_y_inverse(s)?;
        values.push(sol.pointers.e.adjoint() * yinv * (xv - sol.xi.eval(s)?));
    }
    if !(residual <= tolerance) {
        return Err(Error::NotASolution { residual: residual.as_f64(), tolerance: tolerance.as_f64() });
    }
    Ok(RecoveredParameter { omegas: freq.omegas().to_vec(), values, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::kernels::{CausalKernel, ExpSum};
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;
    use crate::solver::pipeline::{solve, SolverConfig};

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    fn z_one_over_s_plus_one() -> SolutionParameter<f64> {
        let k = ExpSum::single(from_real_rows(&[&[1.0]]), cplx(1.0, 0.0)).unwrap();
        SolutionParameter::new(WienerPlusFunction::new(from_real_rows(&[&[0.0]]), CausalKernel::from_expsum(k)).unwrap())
    }

    #[test]
    fn parametrized_solution_and_round_trip() {
        let grid = TimeGrid::from_horizon(0.02, 30.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let z = z_one_over_s_plus_one();
        assert!(z.strictly_proper());
        let x = parametrize(&sol, &z).unwrap();
        let r2 = 2f64.sqrt();
        let x0 = x.eval(SPoint::axis(0.0)).unwrap();
        assert!((x0[(0, 0)].re - (1.0 - 1.0 / r2)).abs() < 1e-3);
        assert!((x0[(1, 0)].re - 1.0 / r2).abs() < 1e-3);
        let gx = sol.g.eval(SPoint::axis(0.0)).unwrap() * &x0;
        assert!((gx[(0, 0)].re - 1.0).abs() < 1e-3);

        let freq = FrequencyGrid::uniform(50.0, 201).unwrap();
        let rec = recover_parameter(&sol, &x, &freq, 1e-3).unwrap();
        for (w, v) in rec.omegas.iter().zip(&rec.values) {
            let expect: crate::scalar::Cplx<f64> = cplx::<f64>(1.0, 0.0) / cplx::<f64>(1.0, *w);
            assert!((v[(0, 0)] - expect).norm() < 1e-3, "w={w}");
        }
        let xi_back = recover_parameter(&sol, &sol.xi, &freq, 1e-3).unwrap();
        assert!(xi_back.values.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn constant_parameter_and_failures() {
        let grid = TimeGrid::from_horizon(0.05, 20.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let z = SolutionParameter::new(WienerPlusFunction::constant_only(from_real_rows(&[&[1.0]])));
        assert!(!z.strictly_proper());
        let x = parametrize(&sol, &z).unwrap();
        assert_eq!(x.eval(SPoint::Infinity).unwrap(), from_real_rows(&[&[1.0], &[1.0]]));
        let wrong = SolutionParameter::new(WienerPlusFunction::constant_only(from_real_rows(&[&[1.0, 2.0]])));
        assert!(parametrize(&sol, &wrong).is_err());
        let freq = FrequencyGrid::uniform(10.0, 21).unwrap();
        let not_solution = WienerPlusFunction::constant_only(from_real_rows(&[&[0.0], &[0.0]]));
        assert!(matches!(recover_parameter(&sol, &not_solution, &freq, 1e-3), Err(Error::NotASolution { .. })));
    }
}
