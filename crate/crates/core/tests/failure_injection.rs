//! Corrupted solutions must fail the checks that detect the corruption.

use std::sync::OnceLock;
use wiener_bezout::diagnostics::{verify, CheckId, ResidualReport, VerifyConfig};
use wiener_bezout::grid::{FrequencyGrid, TimeGrid};
use wiener_bezout::kernels::{CausalKernel, ExpSum, WienerPlusFunction};
use wiener_bezout::matrix::{from_real_rows, identity};
use wiener_bezout::oracle::WorkedInstance;
use wiener_bezout::solver::{assemble, solve, Pointers, SolverConfig};
use wiener_bezout::{Complex64, FreqGrid, Solution};

fn base() -> &'static Solution {
    static SOL: OnceLock<Solution> = OnceLock::new();
    SOL.get_or_init(|| {
        let g = WorkedInstance::new(1.0, 1.0).unwrap().g::<f64>();
        // fine enough for the minimality check, whose error is O(h^2)
        solve(&g, &TimeGrid::from_horizon(0.02, 20.0).unwrap(), &SolverConfig::default()).unwrap()
    })
}

fn freq() -> FreqGrid {
    FrequencyGrid::uniform(50.0, 2001).unwrap()
}

fn report(sol: &Solution) -> ResidualReport {
    verify(sol, &freq(), &VerifyConfig { full: true, ..VerifyConfig::default() })
}

fn failing(r: &ResidualReport) -> Vec<CheckId> {
    r.failures().map(|e| e.check).collect()
}

fn rebuilt(y: CausalKernel<f64>, pointers: Pointers<f64>) -> Solution {
    let s = base();
    assemble(&s.g, y, pointers, s.grid, s.diagnostics).unwrap()
}

#[test]
fn uncorrupted_solution_passes_everything() {
    let r = report(base());
    assert!(r.pass, "{:?}", failing(&r));
    assert_eq!(r.entries.len(), CheckId::REGISTRY.len());
}

#[test]
fn wrong_particular_pointer_breaks_bezout() {
    let s = base();
    let mut ptr = s.pointers.clone();
    ptr.d_plus[(0, 0)] = Complex64::new(1.1, 0.0);
    let r = report(&rebuilt(s.y.clone(), ptr));
    let f = failing(&r);
    assert!(f.contains(&CheckId::Bezout), "{f:?}");
    assert!(!r.pass);
}

#[test]
fn non_isometric_e_breaks_inner_and_tolokonnikov() {
    let s = base();
    let mut ptr = s.pointers.clone();
    ptr.e *= Complex64::new(1.2, 0.0);
    let f = failing(&report(&rebuilt(s.y.clone(), ptr)));
    assert!(f.contains(&CheckId::Inner), "{f:?}");
    assert!(f.contains(&CheckId::Tolokonnikov), "{f:?}");
    assert!(!f.contains(&CheckId::Bezout), "{f:?}");
}

#[test]
fn e_leaking_into_range_breaks_kernel_identity_and_anticausality() {
    let s = base();
    let mut ptr = s.pointers.clone();
    ptr.e = from_real_rows(&[&[0.6], &[0.8]]);
    let f = failing(&report(&rebuilt(s.y.clone(), ptr)));
    assert!(f.contains(&CheckId::KernelIdentity), "{f:?}");
    assert!(f.contains(&CheckId::Anticausality), "{f:?}");
}

#[test]
fn scaled_y_breaks_gy_and_the_operator_checks() {
    let s = base();
    let y = s.y.scaled(Complex64::new(1.05, 0.0));
    let f = failing(&report(&rebuilt(y, s.pointers.clone())));
    for check in [CheckId::GyEqualsD, CheckId::Inner, CheckId::KernelIdentity, CheckId::SchurRoute] {
        assert!(f.contains(&check), "{check} missing from {f:?}");
    }
}

#[test]
fn determinant_with_a_right_half_plane_zero_breaks_winding() {
    // square case with Y = (s - 1)/(s + sqrt 2): G = Y is a valid symbol,
    // but its Y has the wrong winding
    let r2 = std::f64::consts::SQRT_2;
    let k = ExpSum::single(from_real_rows(&[&[-(1.0 + r2)]]), Complex64::new(r2, 0.0)).unwrap();
    let y = CausalKernel::from_expsum(k).neg();
    let g = WienerPlusFunction::constant_only(identity::<f64>(1));
    let ptr = Pointers { d_plus: identity(1), e: wiener_bezout::Matrix::zeros(1, 0) };
    let sol = assemble(&g, y, ptr, TimeGrid::from_horizon(0.02, 20.0).unwrap(), base().diagnostics).unwrap();
    let fine = FrequencyGrid::uniform(50.0, 4001).unwrap();
    let r = verify(&sol, &fine, &VerifyConfig::default());
    let f = failing(&r);
    assert!(f.contains(&CheckId::Winding), "{f:?}");
    assert_eq!(r.entry(CheckId::Winding).unwrap().residual, 1.0);
}

#[test]
fn inconsistent_certificate_breaks_schur_route() {
    let s = base();
    let mut sol = s.clone();
    sol.diagnostics.route_b = false;
    let f = failing(&report(&sol));
    assert_eq!(f, vec![CheckId::SchurRoute]);
}

