//! Integrals over the imaginary axis: trapezoid on the grid plus an analytic
//! tail for integrands decaying like `c / w^2 + d / w^4`, fitted on the last
//! decade of each half of the grid.

use crate::scalar::{Cplx, Real};
use num_complex::Complex;

/// `int_R f(w) dw` from samples on a symmetric grid (not divided by 2 pi).
pub fn integrate_axis<T: Real>(omegas: &[T], values: &[Cplx<T>]) -> Cplx<T> {
    assert_eq!(omegas.len(), values.len());
    let n = omegas.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..n.saturating_sub(1) {
        let w = (omegas[k + 1] - omegas[k]) * T::lit(0.5);
        acc += (values[k] + values[k + 1]) * Complex::new(w, T::zero());
    }
    acc + tail(omegas, values, true) + tail(omegas, values, false)
}

pub fn integrate_axis_real<T: Real>(omegas: &[T], values: &[T]) -> T {
    let v: Vec<Cplx<T>> = values.iter().map(|x| Complex::new(*x, T::zero())).collect();
    integrate_axis(omegas, &v).re
}

fn tail<T: Real>(omegas: &[T], values: &[Cplx<T>], positive: bool) -> Cplx<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let edge = if positive { omegas[omegas.len() - 1] } else { -omegas[0] };
    if !(edge > T::zero()) {
        return zero;
    }
    let lo = edge * T::lit(0.1);
    // least squares for w^2 f ~ c + d u with u = 1/w^2, so that every point of
    // the decade carries the same relative weight
    let (mut s0, mut s1, mut s2) = (T::zero(), T::zero(), T::zero());
    let (mut r0, mut r1) = (zero, zero);
    let mut count = 0;
    for (w, f) in omegas.iter().zip(values) {
        let a = if positive { *w } else { -*w };
        if a < lo {
            continue;
        }
        let u = T::one() / (a * a);
        let g = *f * Complex::new(a * a, T::zero());
        s0 += T::one();
        s1 += u;
        s2 += u * u;
        r0 += g;
        r1 += g * Complex::new(u, T::zero());
        count += 1;
    }
    if count < 3 {
        return zero;
    }
    let det = s0 * s2 - s1 * s1;
    let (c, d) = if det > T::lit(1e-14) * s0 * s2 {
        let inv = T::one() / det;
        (
            (r0 * Complex::new(s2, T::zero()) - r1 * Complex::new(s1, T::zero())) * Complex::new(inv, T::zero()),
            (r1 * Complex::new(s0, T::zero()) - r0 * Complex::new(s1, T::zero())) * Complex::new(inv, T::zero()),
        )
    } else {
        (r0 / Complex::new(s0, T::zero()), zero)
    };
    c / Complex::new(edge, T::zero()) + d / Complex::new(T::lit(3.0) * edge * edge * edge, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;

    #[test]
    fn lorentzian_integrates_to_pi() {
        let freq = FrequencyGrid::<f64>::uniform(50.0, 2001).unwrap();
        let v: Vec<f64> = freq.omegas().iter().map(|w| 1.0 / (1.0 + w * w)).collect();
        let total = integrate_axis_real(freq.omegas(), &v);
        assert!((total - std::f64::consts::PI).abs() < 5e-5, "{total}");
        // without the tail the truncation error is about 2/50
        let plain: f64 = freq
            .omegas()
            .windows(2)
            .zip(v.windows(2))
            .map(|(w, f)| 0.5 * (w[1] - w[0]) * (f[0] + f[1]))
            .sum();
        assert!((plain - std::f64::consts::PI).abs() > 1e-2);
    }

    #[test]
    fn complex_integrand_with_odd_part() {
        let freq = FrequencyGrid::<f64>::uniform(40.0, 1601).unwrap();
        // 1/(1 + i w)^2 integrates to zero over the axis; its real part decays like 1/w^2
        let v: Vec<Cplx<f64>> = freq
            .omegas()
            .iter()
            .map(|w| {
                let z = Complex::new(1.0, *w);
                Complex::new(1.0, 0.0) / (z * z)
            })
            .collect();
        let total = integrate_axis(freq.omegas(), &v);
        assert!(total.norm() < 5e-5, "{total}");
    }
}
