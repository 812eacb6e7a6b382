use super::appendix::{decomposition_check, hankel_rank_check, kappa_bounds, schur_route_check};
use super::causality::{anticausality, kernel_identity, pythagoras_random};
use super::identities::{eval_on_grid, residual_bezout, residual_gy, residual_inner, residual_tolokonnikov, winding_check};
use super::report::{CheckId, GridMetadata, ReportEntry, ResidualReport};
use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::kernels::io::entry_headers;
use crate::matrix::fmt_e12;
use crate::scalar::Real;
use crate::solver::{BezoutSolution, CertifyConfig};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Floor of the default identity tolerance.
pub const BASE_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Adds pythagoras and the operator-level checks.
    pub full: bool,
    /// Overrides the grid-dependent tolerance of the identity checks.
    pub tolerance: Option<f64>,
    pub pythagoras_draws: usize,
    pub seed: u64,
    pub certify: CertifyConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { full: false, tolerance: None, pythagoras_draws: 20, seed: 0x5eed, certify: CertifyConfig::default() }
    }
}

/// `max(1e-3, 10 * solver residual)`.
pub fn default_tolerance<T: Real>(sol: &BezoutSolution<T>) -> f64 {
    BASE_TOL.max(10.0 * sol.diagnostics.solver_residual)
}

pub fn grid_metadata<T: Real>(sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>) -> GridMetadata {
    GridMetadata {
        step: sol.grid.step().as_f64(),
        horizon: sol.grid.horizon().as_f64(),
        samples: sol.grid.count(),
        omega_max: freq.omega_max().as_f64(),
        freq_count: freq.len(),
    }
}

/// Runs one registry check; evaluation errors become failing entries.
pub fn run_check<T: Real>(check: CheckId, sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>, cfg: &VerifyConfig) -> ReportEntry {
    let tol = cfg.tolerance.unwrap_or_else(|| default_tolerance(sol));
    let result = match check {
        CheckId::Bezout => residual_bezout(&sol.g, &sol.xi, freq, tol),
        CheckId::GyEqualsD => residual_gy(&sol.g, &sol.big_y, freq, tol),
        CheckId::Inner => residual_inner(&sol.theta, freq, tol),
        CheckId::Tolokonnikov => residual_tolokonnikov(sol, freq, tol),
        CheckId::Winding => winding_check(&sol.big_y, freq),
        CheckId::KernelIdentity => kernel_identity(sol, tol),
        CheckId::Anticausality => anticausality(sol, freq, tol),
        CheckId::Pythagoras => pythagoras_random(sol, freq, tol, cfg.pythagoras_draws, cfg.seed),
        CheckId::Decomposition => decomposition_check(&sol.g, &sol.grid, tol),
        CheckId::KappaBounds => kappa_bounds(&sol.g, &sol.grid),
        CheckId::HankelRank => hankel_rank_check(&sol.g, &sol.grid),
        CheckId::SchurRoute => schur_route_check(sol, &cfg.certify),
    };
    result.unwrap_or_else(|e| ReportEntry::failed(check, tol, e.to_string()))
}

/// Base checks, plus the full registry when `cfg.full`.
pub fn verify<T: Real>(sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>, cfg: &VerifyConfig) -> ResidualReport {
    let mut report = ResidualReport::new(grid_metadata(sol, freq));
    for check in CheckId::REGISTRY {
        if cfg.full || check.is_base() {
            report.push(run_check(check, sol, freq, cfg));
        }
    }
    report
}

/// CSV of `Xi`, `Theta` and `Y` on the grid: `omega`, then `re`/`im` columns
/// per entry prefixed with the function name.
pub fn write_traces<T: Real, W: Write>(sol: &BezoutSolution<T>, freq: &FrequencyGrid<T>, out: W) -> Result<()> {
    let funcs = [("Xi", &sol.xi), ("Theta", &sol.theta), ("Y", &sol.big_y)];
    let mut header = vec!["omega".to_string()];
    let mut values = Vec::new();
    for (name, f) in funcs {
        header.extend(entry_headers(f.rows(), f.cols()).into_iter().map(|h| {
            let (part, idx) = h.split_once('_').expect("entry header");
            format!("{part}_{name}_{idx}")
        }));
        values.push(eval_on_grid(f, freq)?);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for (k, omega) in freq.omegas().iter().enumerate() {
        let mut row = vec![fmt_e12(omega.as_f64())];
        for vals in &values {
            let v = &vals[k];
            for i in 0..v.nrows() {
                for j in 0..v.ncols() {
                    row.push(fmt_e12(v[(i, j)].re.as_f64()));
                    row.push(fmt_e12(v[(i, j)].im.as_f64()));
                }
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::kernels::{CausalKernel, ExpSum, WienerPlusFunction};
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;
    use crate::solver::{solve, SolverConfig};

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    #[test]
    fn base_and_full_registry() {
        let grid = TimeGrid::from_horizon(0.05, 20.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let freq = FrequencyGrid::uniform(50.0, 2001).unwrap();
        let base = verify(&sol, &freq, &VerifyConfig::default());
        assert_eq!(base.entries.len(), 7);
        assert!(base.pass, "{:#?}", base.failures().collect::<Vec<_>>());
        let full = verify(&sol, &freq, &VerifyConfig { full: true, pythagoras_draws: 3, ..Default::default() });
        let ids: Vec<_> = full.entries.iter().map(|e| e.check).collect();
        assert_eq!(ids, CheckId::REGISTRY.to_vec());
        assert!(full.pass, "{:#?}", full.failures().collect::<Vec<_>>());
    }

    #[test]
    fn traces_layout() {
        let grid = TimeGrid::from_horizon(0.05, 20.0).unwrap();
        let sol = solve(&g0(), &grid, &SolverConfig::default()).unwrap();
        let freq = FrequencyGrid::uniform(10.0, 5).unwrap();
        let mut buf = Vec::new();
        write_traces(&sol, &freq, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "omega,re_Xi_1_1,im_Xi_1_1,re_Xi_2_1,im_Xi_2_1,re_Theta_1_1,im_Theta_1_1,re_Theta_2_1,im_Theta_2_1,\
             re_Y_1_1,im_Y_1_1,re_Y_1_2,im_Y_1_2,re_Y_2_1,im_Y_2_1,re_Y_2_2,im_Y_2_2"
        );
        assert_eq!(text.lines().count(), 6);
    }
}
