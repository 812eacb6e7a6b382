//! Extreme eigenvalues and norms: dense eigensolves for small operators,
//! Lanczos with full reorthogonalization otherwise.

use super::operator::DiscretizedOperator;
use crate::error::{Error, Result};
use crate::matrix;
use crate::scalar::{cabs, Cplx, Real};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HERMITIAN_TOL: f64 = 1e-8;
const LANCZOS_MAX: usize = 200;
/// Stopping rule: both extreme Ritz values moved by less than this (relative
/// to the spectral radius) over the last ten steps.
const LANCZOS_RTOL: f64 = 1e-6;

pub(crate) fn random_vector<T: Real>(len: usize, seed: u64) -> Vec<Cplx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
        .collect()
}

pub(crate) fn dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

pub(crate) fn norm<T: Real>(a: &[Cplx<T>]) -> T {
    a.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im).sqrt()
}

fn axpy<T: Real>(y: &mut [Cplx<T>], a: Cplx<T>, x: &[Cplx<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * *xi;
    }
}

/// Relative deviation from self-adjointness: exact for dense operators,
/// probed with two random vectors otherwise.
pub fn hermitian_defect<T: Real>(op: &DiscretizedOperator<T>) -> T {
    if op.nrows() != op.ncols() {
        return T::lit(f64::INFINITY);
    }
    if op.is_small() {
        let d = op.to_dense();
        let scale = matrix::frobenius(&d);
        if scale == T::zero() {
            return T::zero();
        }
        return matrix::frobenius(&(&d - d.adjoint())) / scale;
    }
    let x = random_vector::<T>(op.ncols(), 0x4e52);
    let y = random_vector::<T>(op.ncols(), 0x4e53);
    let ax = op.apply(&x);
    let ay = op.apply(&y);
    let lhs = dot(&y, &ax);
    let rhs = dot(&ay, &x);
    let scale = norm(&ax) * norm(&y) + norm(&ay) * norm(&x);
    if scale == T::zero() {
        return T::zero();
    }
    cabs(lhs - rhs) / scale
}

fn require_hermitian<T: Real>(op: &DiscretizedOperator<T>) -> Result<()> {
    let defect = hermitian_defect(op);
    if !(defect <= T::lit(HERMITIAN_TOL)) {
        return Err(Error::NotHermitian { asymmetry: defect.as_f64() });
    }
    Ok(())
}

/// Extreme Ritz values of a Hermitian operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremes<T> {
    pub min: T,
    pub max: T,
    pub iterations: usize,
}

/// Lanczos with full reorthogonalization from a fixed random start.
pub fn lanczos_extremes<T: Real>(op: &DiscretizedOperator<T>) -> Extremes<T> {
    let n = op.ncols();
    let max_iter = LANCZOS_MAX.min(n);
    let mut q = random_vector::<T>(n, 0x1a9c);
    let nq = norm(&q);
    for z in &mut q {
        *z /= Complex::new(nq, T::zero());
    }
    let mut basis: Vec<Vec<Cplx<T>>> = vec![q];
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut last = (T::zero(), T::zero());
    let mut result = Extremes { min: T::zero(), max: T::zero(), iterations: 0 };
    for k in 0..max_iter {
        let mut w = op.apply(&basis[k]);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(&mut w, -c, v);
            }
        }
        let b = norm(&w);
        let done = k + 1 == max_iter;
        let scale = alpha.iter().fold(T::zero(), |acc, v| acc.max(v.abs())).max(b);
        let exhausted = b <= T::lit(1e-12) * scale.max(T::lit(1e-300));
        if (k + 1) % 10 == 0 || done || exhausted {
            let (lo, hi) = tridiagonal_extremes(&alpha, &beta);
            result = Extremes { min: lo, max: hi, iterations: k + 1 };
            let tol = T::lit(LANCZOS_RTOL) * hi.abs().max(lo.abs()).max(T::lit(1e-300));
            if exhausted || ((lo - last.0).abs() <= tol && (hi - last.1).abs() <= tol && k >= 19) {
                break;
            }
            last = (lo, hi);
        }
        if done {
            break;
        }
        beta.push(b);
        for z in &mut w {
            *z /= Complex::new(b, T::zero());
        }
        basis.push(w);
    }
    result
}

fn tridiagonal_extremes<T: Real>(alpha: &[T], beta: &[T]) -> (T, T) {
    let k = alpha.len();
    let mut t = DMatrix::<T>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let ev = t.symmetric_eigenvalues();
    let lo = ev.iter().fold(T::lit(f64::INFINITY), |a, v| a.min(*v));
    let hi = ev.iter().fold(T::lit(f64::NEG_INFINITY), |a, v| a.max(*v));
    (lo, hi)
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue<T: Real>(op: &DiscretizedOperator<T>) -> Result<T> {
    Ok(extreme_eigenvalues(op)?.min)
}

pub fn extreme_eigenvalues<T: Real>(op: &DiscretizedOperator<T>) -> Result<Extremes<T>> {
    require_hermitian(op)?;
    if op.nrows() == 0 {
        return Ok(Extremes { min: T::zero(), max: T::zero(), iterations: 0 });
    }
    if op.is_small() {
        let ev = matrix::hermitian_eigenvalues(&op.to_dense());
        return Ok(Extremes { min: ev[0], max: ev[ev.len() - 1], iterations: 0 });
    }
    Ok(lanczos_extremes(op))
}

/// `max |lambda|` of a Hermitian operator.
pub fn hermitian_spectral_radius<T: Real>(op: &DiscretizedOperator<T>) -> Result<T> {
    let e = extreme_eigenvalues(op)?;
    Ok(e.min.abs().max(e.max.abs()))
}

/// Largest singular value.
pub fn spectral_norm<T: Real>(op: &DiscretizedOperator<T>) -> Result<T> {
    if op.nrows() == 0 || op.ncols() == 0 {
        return Ok(T::zero());
    }
    if op.is_small() {
        return Ok(matrix::spectral_norm(&op.to_dense()));
    }
    let gram = if op.nrows() <= op.ncols() { op.compose(&op.adjoint())? } else { op.adjoint().compose(op)? };
    Ok(lanczos_extremes(&gram).max.max(T::zero()).sqrt())
}

/// Singular values of a small operator, descending.
pub fn singular_values<T: Real>(op: &DiscretizedOperator<T>) -> Vec<T> {
    matrix::singular_values(&op.to_dense())
}

/// Frobenius norm: exact for small operators, otherwise the Hutchinson
/// estimate `(mean ||A z||^2)^{1/2}` over Rademacher probes.
pub fn frobenius_estimate<T: Real>(op: &DiscretizedOperator<T>, probes: usize) -> T {
    if op.is_small() {
        return matrix::frobenius(&op.to_dense());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xf70b);
    let mut acc = T::zero();
    for _ in 0..probes.max(1) {
        let z: Vec<Cplx<T>> = (0..op.ncols())
            .map(|_| Complex::new(if rng.gen::<bool>() { T::one() } else { -T::one() }, T::zero()))
            .collect();
        let v = norm(&op.apply(&z));
        acc += v * v;
    }
    (acc / T::from_usize_lossy(probes.max(1))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::halfline::build::{build_tg_tgstar, build_tr, wiener_hopf_named};
    use crate::kernels::{CausalKernel, ExpSum, WienerPlusFunction};
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let grid = TimeGrid::new(0.1, 700).unwrap();
        let id = DiscretizedOperator::<f64>::identity(1, grid);
        assert!((min_eigenvalue(&id).unwrap() - 1.0).abs() < 1e-12);
        let small = DiscretizedOperator::<f64>::identity(2, TimeGrid::new(0.1, 10).unwrap());
        assert!((min_eigenvalue(&small).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tg_tgstar_for_g0_starts_at_one() {
        for grid in [TimeGrid::from_horizon(0.1, 30.0).unwrap(), TimeGrid::from_horizon(0.01, 30.0).unwrap()] {
            let tg = wiener_hopf_named(&g0(), &grid, "T_G").unwrap();
            let t = build_tg_tgstar(&tg).unwrap();
            let lam = min_eigenvalue(&t).unwrap();
            assert!((1.0..=1.05).contains(&lam), "N={} lambda={lam}", grid.count());
        }
    }

    #[test]
    fn zero_symbol_has_zero_spectrum() {
        let grid = TimeGrid::from_horizon(0.1, 5.0).unwrap();
        let f = WienerPlusFunction::<f64>::constant_only(from_real_rows(&[&[0.0, 0.0]]));
        let tg = wiener_hopf_named(&f, &grid, "T_G").unwrap();
        assert_eq!(min_eigenvalue(&build_tg_tgstar(&tg).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn lanczos_matches_dense_on_tr() {
        let grid = TimeGrid::from_horizon(0.1, 40.0).unwrap();
        let tr = build_tr(&g0(), &grid).unwrap();
        let dense = matrix::hermitian_eigenvalues(&tr.to_dense());
        let l = lanczos_extremes(&tr);
        assert!((l.max - dense[dense.len() - 1]).abs() < 1e-8);
        assert!((l.min - dense[0]).abs() < 1e-3, "{} vs {}", l.min, dense[0]);
        assert!(l.min >= dense[0] - 1e-10);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let grid = TimeGrid::from_horizon(0.1, 3.0).unwrap();
        let tg = wiener_hopf_named(&g0(), &grid, "T_G").unwrap();
        let sq = tg.compose(&tg.adjoint()).unwrap();
        assert!(min_eigenvalue(&sq).is_ok());
        let k = ExpSum::single(from_real_rows(&[&[1.0]]), cplx(1.0, 0.0)).unwrap();
        let f = WienerPlusFunction::new(from_real_rows(&[&[1.0]]), CausalKernel::from_expsum(k)).unwrap();
        let t = wiener_hopf_named(&f, &grid, "T").unwrap();
        assert!(matches!(min_eigenvalue(&t), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn norms_agree_between_paths() {
        let grid = TimeGrid::from_horizon(0.05, 40.0).unwrap();
        let tg = wiener_hopf_named(&g0(), &grid, "T_G").unwrap();
        assert!(!tg.is_small());
        let big = spectral_norm(&tg).unwrap();
        // symbol sup: |G(iw)|^2 = 1 + 1/(1 + w^2) peaks at 2
        assert!((big - 2f64.sqrt()).abs() < 1e-2, "{big}");
        let fro = frobenius_estimate(&tg, 64);
        let exact = matrix::frobenius(&tg.to_dense());
        assert!((fro - exact).abs() < 0.1 * exact);
    }
}
