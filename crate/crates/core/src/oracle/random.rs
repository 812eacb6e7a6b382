//! Seeded random instances for property tests and randomized checks.

use crate::kernels::{CausalKernel, ExpSum, ExpTerm, SPoint, WienerPlusFunction};
use crate::matrix;
use crate::scalar::{CMat, Cplx, Real};
use num_complex::Complex;
use rand::Rng;

fn entry<T: Real, R: Rng>(rng: &mut R, scale: f64) -> Cplx<T> {
    Complex::new(T::lit(rng.gen_range(-scale..scale)), T::lit(rng.gen_range(-scale..scale)))
}

pub fn matrix<T: Real, R: Rng>(rows: usize, cols: usize, scale: f64, rng: &mut R) -> CMat<T> {
    CMat::from_fn(rows, cols, |_, _| entry(rng, scale))
}

/// Exponential sum with `terms` full-rank terms, `Re a` in `[0.5, 3]`,
/// `|Im a| <= 2` and coefficient entries of modulus below `scale`.
pub fn expsum<T: Real, R: Rng>(rows: usize, cols: usize, terms: usize, scale: f64, rng: &mut R) -> ExpSum<T> {
    let terms = (0..terms)
        .map(|_| ExpTerm {
            coeff: matrix(rows, cols, scale, rng),
            rate: Complex::new(T::lit(rng.gen_range(0.5..3.0)), T::lit(rng.gen_range(-2.0..2.0))),
        })
        .collect();
    ExpSum::new(rows, cols, terms).expect("rates in the right half plane")
}

/// Strictly proper `Z` with one or two terms.
pub fn strictly_proper<T: Real, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> WienerPlusFunction<T> {
    let n = rng.gen_range(1..=2);
    let k = CausalKernel::from_expsum(expsum(rows, cols, n, 1.0, rng));
    WienerPlusFunction::new(CMat::zeros(rows, cols), k).expect("valid parameter")
}

pub fn unit_vector<T: Real, R: Rng>(len: usize, rng: &mut R) -> Vec<Cplx<T>> {
    loop {
        let v: Vec<Cplx<T>> = (0..len).map(|_| entry(rng, 1.0)).collect();
        let n = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if n > T::lit(1e-3) {
            return v.into_iter().map(|z| z / Complex::new(n, T::zero())).collect();
        }
    }
}

/// Smallest singular value required of `D`.
pub const D_MARGIN: f64 = 0.3;
/// Smallest singular value required of `G(i w)` on the sampled axis.
pub const AXIS_MARGIN: f64 = 0.2;

/// `min_w sigma_min(G(i w))` over `|w| <= 30` in steps of 0.05; the kernel
/// rates keep every feature at least 0.5 wide.
pub fn axis_margin<T: Real>(g: &WienerPlusFunction<T>) -> T {
    let m = g.rows();
    (0..=1200)
        .map(|k| {
            let w = T::lit(-30.0 + 0.05 * k as f64);
            let v = g.eval(SPoint::axis(w)).expect("axis point");
            matrix::singular_values(&v)[m - 1]
        })
        .fold(T::lit(f64::INFINITY), |a, b| a.min(b))
}

/// `m x p` symbol with `sigma_min(D) >= D_MARGIN`, a one- or two-term
/// kernel and `sigma_min(G(i w)) >= AXIS_MARGIN` on the axis, so that
/// `T_G T_G*` is well conditioned.
pub fn instance<T: Real, R: Rng>(m: usize, p: usize, rng: &mut R) -> WienerPlusFunction<T> {
    loop {
        let d = matrix::<T, R>(m, p, 1.0, rng);
        let sv = matrix::singular_values(&d);
        if !sv.last().is_some_and(|s| *s >= T::lit(D_MARGIN)) {
            continue;
        }
        let n = rng.gen_range(1..=2);
        let g = WienerPlusFunction::new(d, CausalKernel::from_expsum(expsum(m, p, n, 0.8, rng))).expect("valid symbol");
        if axis_margin(&g) >= T::lit(AXIS_MARGIN) {
            return g;
        }
    }
}

/// Symbol whose constant term has rank `m - 1`, hence not right invertible.
pub fn rank_deficient_instance<T: Real, R: Rng>(m: usize, p: usize, rng: &mut R) -> WienerPlusFunction<T> {
    let mut d = matrix::<T, R>(m, p, 1.0, rng);
    let row0 = d.row(0).clone_owned();
    let c: Cplx<T> = entry(rng, 1.0);
    if m > 1 {
        d.set_row(m - 1, &(row0 * c));
    } else {
        d.fill(Complex::new(T::zero(), T::zero()));
    }
    let n = rng.gen_range(1..=2);
    WienerPlusFunction::new(d, CausalKernel::from_expsum(expsum(m, p, n, 0.8, rng))).expect("valid symbol")
}
