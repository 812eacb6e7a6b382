//! Discretization error of `y` measured by solving on a grid and on its
//! refinement.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::kernels::{CausalKernel, WienerPlusFunction};
use crate::scalar::Real;
use crate::solver::{compute_y, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualGridReport {
    /// `max |y_h - y_{h/2}|` at the coarse sample points.
    pub sup_difference: f64,
    /// Errors against the exact kernel, when one was supplied.
    pub coarse_error: Option<f64>,
    pub fine_error: Option<f64>,
    /// Empirical convergence order; absent when both measurements vanish.
    pub order: Option<f64>,
}

/// Largest Frobenius distance between two kernels at the sample points of
/// `reference` on `[0, horizon / 2]` (the far end is polluted by truncation).
fn sup_distance<T: Real>(reference: &CausalKernel<T>, other: &dyn Fn(T) -> crate::scalar::CMat<T>) -> f64 {
    let s = reference.samples().expect("sampled kernel");
    let limit = s.grid().horizon() * T::lit(0.5);
    let mut worst = 0.0f64;
    for j in 0..s.len() {
        let t = s.time(j);
        if t > limit {
            break;
        }
        worst = worst.max((s.value(j) - other(t)).norm().as_f64());
    }
    worst
}

fn order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
}

/// Solves for `y` on `coarse` and `fine` (same horizon, half the step). With
/// an exact kernel the order is `log2(err_h / err_{h/2})`; otherwise a third
/// solve on `fine.refined()` gives `log2(|y_h - y_{h/2}| / |y_{h/2} - y_{h/4}|)`.
pub fn dual_grid_compare<T: Real>(
    g: &WienerPlusFunction<T>,
    coarse: &TimeGrid<T>,
    fine: &TimeGrid<T>,
    cfg: &SolverConfig,
    exact: Option<&CausalKernel<T>>,
) -> Result<DualGridReport> {
    let rel = (fine.horizon() - coarse.horizon()).abs() / coarse.horizon();
    if rel > T::lit(1e-9) || (fine.step() * T::lit(2.0) - coarse.step()).abs() > coarse.step() * T::lit(1e-9) {
        return Err(Error::InvalidGrid("refined grid must halve the step at the same horizon".into()));
    }
    let yc = compute_y(g, coarse, cfg)?.y;
    let yf = compute_y(g, fine, cfg)?.y;
    let fs = yf.samples().expect("sampled y").clone();
    let sup_difference = sup_distance(&yc, &|t| fs.interpolate(t));
    if let Some(k) = exact {
        let ce = sup_distance(&yc, &|t| k.eval(t));
        let fe = sup_distance(&yf, &|t| k.eval(t));
        return Ok(DualGridReport { sup_difference, coarse_error: Some(ce), fine_error: Some(fe), order: order(ce, fe) });
    }
    let finer = fine.refined();
    let yff = compute_y(g, &finer, cfg)?.y;
    let ffs = yff.samples().expect("sampled y").clone();
    let second = sup_distance(&yc, &|t| fs.interpolate(t) - ffs.interpolate(t));
    Ok(DualGridReport { sup_difference, coarse_error: None, fine_error: None, order: order(sup_difference, second) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::from_real_rows;
    use crate::oracle::worked::WorkedInstance;

    #[test]
    fn worked_family_is_second_order() {
        let w = WorkedInstance::new(1.0, 1.0).unwrap();
        let coarse = TimeGrid::from_horizon(0.04, 20.0).unwrap();
        let r = dual_grid_compare(&w.g(), &coarse, &coarse.refined(), &SolverConfig::default(), Some(&w.y_kernel()))
            .unwrap();
        let order = r.order.unwrap();
        assert!((1.5..=2.5).contains(&order), "{r:?}");
        assert!(r.fine_error.unwrap() < r.coarse_error.unwrap());
    }

    #[test]
    fn zero_kernel_is_identical() {
        let g = WienerPlusFunction::constant_only(from_real_rows(&[&[1.0, 0.0]]));
        let coarse = TimeGrid::from_horizon(0.1, 5.0).unwrap();
        let r = dual_grid_compare::<f64>(&g, &coarse, &coarse.refined(), &SolverConfig::default(), None).unwrap();
        assert_eq!(r.sup_difference, 0.0);
        assert_eq!(r.order, None);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let w = WorkedInstance::new(1.0, 1.0).unwrap();
        let a = TimeGrid::from_horizon(0.1, 5.0).unwrap();
        let b = TimeGrid::from_horizon(0.05, 6.0).unwrap();
        assert!(dual_grid_compare::<f64>(&w.g(), &a, &b, &SolverConfig::default(), None).is_err());
    }
}
