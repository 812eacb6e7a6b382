use crate::error::{Error, Result};
use crate::matrix;
use crate::scalar::{cabs, CMat, Real};
use nalgebra::SVD;
use num_complex::Complex;

/// Smallest admissible `sigma_min / sigma_max` of `D`.
pub const RANK_TOL: f64 = 1e-10;

/// Right inverse `D+ = D* (D D*)^{-1}` and an isometry `E` onto `ker D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pointers<T: Real> {
    pub d_plus: CMat<T>,
    pub e: CMat<T>,
}

impl<T: Real> Pointers<T> {
    /// `[D; E*] [D+, E]`, the identity when the pointers are consistent.
    pub fn block_product(&self, d: &CMat<T>) -> CMat<T> {
        let (m, p) = d.shape();
        let mut left = CMat::zeros(p, p);
        left.view_mut((0, 0), (m, p)).copy_from(d);
        left.view_mut((m, 0), (p - m, p)).copy_from(&self.e.adjoint());
        let mut right = CMat::zeros(p, p);
        right.view_mut((0, 0), (p, m)).copy_from(&self.d_plus);
        right.view_mut((0, m), (p, p - m)).copy_from(&self.e);
        left * right
    }
}

pub fn right_pointers<T: Real>(d: &CMat<T>) -> Result<Pointers<T>> {
    let (m, p) = d.shape();
    if m > p {
        return Err(Error::DimensionMismatch(format!("D is {m}x{p}; need m <= p")));
    }
    if !matrix::is_finite(d) {
        return Err(Error::InvalidParameter("D has non-finite entries".into()));
    }
    if m > 0 {
        let sv = matrix::singular_values(d);
        let ratio = if sv[0] > T::zero() { sv[m - 1] / sv[0] } else { T::zero() };
        if !(ratio > T::lit(RANK_TOL)) {
            return Err(Error::SurjectivityFailure { ratio: ratio.as_f64() });
        }
    }
    // D* (D D*)^{-1} through the SVD, which is the same matrix for full row
    // rank D but avoids squaring the condition number
    let d_plus = if m == 0 {
        CMat::zeros(p, 0)
    } else {
        SVD::new(d.clone(), true, true)
            .pseudo_inverse(T::zero())
            .map_err(|_| Error::SurjectivityFailure { ratio: 0.0 })?
    };
    let e = canonical_kernel_basis(d);
    Ok(Pointers { d_plus, e })
}

/// Orthonormal basis of `ker D` in canonical echelon form: column `k` has its
/// first nonzero entry real positive, and the leading indices decrease from
/// the first column to the last.
fn canonical_kernel_basis<T: Real>(d: &CMat<T>) -> CMat<T> {
    let (m, p) = d.shape();
    let k = p - m;
    if k == 0 {
        return CMat::zeros(p, 0);
    }
    let mut padded = CMat::zeros(p, p);
    padded.view_mut((0, 0), (m, p)).copy_from(d);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|a, b| svd.singular_values[*a].partial_cmp(&svd.singular_values[*b]).expect("finite"));
    let mut cols: Vec<Vec<Complex<T>>> = order[..k]
        .iter()
        .map(|&r| (0..p).map(|c| v_t[(r, c)].conj()).collect())
        .collect();
    let tiny = T::lit(1e-13);
    let mut active: Vec<usize> = (0..k).collect();
    let mut pivots = Vec::with_capacity(k);
    for row in 0..p {
        if active.is_empty() {
            break;
        }
        let nonzero: Vec<usize> = active.iter().copied().filter(|&c| cabs(cols[c][row]) > tiny).collect();
        let Some(&pivot) = nonzero.first() else {
            continue;
        };
        for &other in &nonzero[1..] {
            let a = cols[pivot][row];
            let b = cols[other][row];
            let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let rinv = Complex::new(T::one() / rho, T::zero());
            for i in 0..p {
                let x = cols[pivot][i];
                let y = cols[other][i];
                cols[pivot][i] = (a.conj() * x + b.conj() * y) * rinv;
                cols[other][i] = (a * y - b * x) * rinv;
            }
            cols[other][row] = Complex::new(T::zero(), T::zero());
        }
        let lead = cols[pivot][row];
        let phase = lead.conj() * Complex::new(T::one() / cabs(lead), T::zero());
        for v in cols[pivot].iter_mut() {
            *v *= phase;
        }
        cols[pivot][row] = Complex::new(cols[pivot][row].re, T::zero());
        for i in 0..row {
            cols[pivot][i] = Complex::new(T::zero(), T::zero());
        }
        active.retain(|&c| c != pivot);
        pivots.push(pivot);
    }
    let mut e = CMat::zeros(p, k);
    for (j, &c) in pivots.iter().rev().enumerate() {
        for i in 0..p {
            let v = cols[c][i];
            let re = if v.re.abs() <= T::lit(1e-15) { T::zero() } else { v.re };
            let im = if v.im.abs() <= T::lit(1e-15) { T::zero() } else { v.im };
            e[(i, j)] = Complex::new(re, im);
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{from_real_rows, identity};
    use crate::scalar::cplx;
    use proptest::prelude::*;

    fn close(a: &CMat<f64>, b: &CMat<f64>, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).norm() <= tol
    }

    #[test]
    fn d_row_one_zero() {
        let d = from_real_rows(&[&[1.0, 0.0]]);
        let ptr = right_pointers::<f64>(&d).unwrap();
        assert!(close(&ptr.d_plus, &from_real_rows(&[&[1.0], &[0.0]]), 1e-15));
        assert!(close(&ptr.e, &from_real_rows(&[&[0.0], &[1.0]]), 1e-15));
        assert!(close(&ptr.block_product(&d), &identity(2), 1e-15));
    }

    #[test]
    fn square_identity_has_empty_e() {
        let d = identity::<f64>(3);
        let ptr = right_pointers(&d).unwrap();
        assert!(close(&ptr.d_plus, &d, 1e-15));
        assert_eq!(ptr.e.shape(), (3, 0));
    }

    #[test]
    fn d_zero_two() {
        let d = from_real_rows(&[&[0.0, 2.0]]);
        let ptr = right_pointers::<f64>(&d).unwrap();
        assert!(close(&ptr.d_plus, &from_real_rows(&[&[0.0], &[0.5]]), 1e-15));
        assert!(close(&ptr.e, &from_real_rows(&[&[1.0], &[0.0]]), 1e-15));
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let d = from_real_rows::<f64>(&[&[0.0, 0.0]]);
        assert!(matches!(right_pointers(&d), Err(Error::SurjectivityFailure { .. })));
        let d = from_real_rows::<f64>(&[&[1.0, 2.0, 0.0], &[2.0, 4.0, 0.0]]);
        assert!(matches!(right_pointers(&d), Err(Error::SurjectivityFailure { .. })));
        assert!(right_pointers(&from_real_rows::<f64>(&[&[1.0], &[1.0]])).is_err());
    }

    #[test]
    fn echelon_ordering_for_two_dimensional_kernel() {
        let d = from_real_rows::<f64>(&[&[1.0, 0.0, 0.0]]);
        let e = right_pointers(&d).unwrap().e;
        assert!(close(&e, &from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]), 1e-14));
    }

    fn matrix_strategy(m: usize, p: usize) -> impl Strategy<Value = CMat<f64>> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), m * p)
            .prop_map(move |v| CMat::from_fn(m, p, |i, j| cplx(v[i * p + j].0, v[i * p + j].1)))
    }

    proptest! {
        #[test]
        fn pointer_invariants((m, p, d) in (1usize..4, 0usize..3).prop_flat_map(|(m, extra)| {
            let p = m + extra;
            (Just(m), Just(p), matrix_strategy(m, p))
        })) {
            prop_assume!({
                let sv = matrix::singular_values(&d);
                sv[m - 1] > 1e-3 * sv[0]
            });
            let ptr = right_pointers(&d).unwrap();
            prop_assert!((&d * &ptr.d_plus - identity::<f64>(m)).norm() < 1e-12);
            prop_assert!((&d * &ptr.e).norm() < 1e-12);
            prop_assert!((ptr.e.adjoint() * &ptr.e - identity::<f64>(p - m)).norm() < 1e-12);
            prop_assert!((ptr.block_product(&d) - identity::<f64>(p)).norm() < 1e-10);
            // canonical form: leading entries real positive, leading indices descending
            let mut last = usize::MAX;
            for c in 0..p - m {
                let lead = (0..p).find(|&i| ptr.e[(i, c)].norm() > 1e-13).unwrap();
                prop_assert!(ptr.e[(lead, c)].re > 0.0 && ptr.e[(lead, c)].im == 0.0);
                prop_assert!(lead < last);
                last = lead;
            }
            // unitary change of the input basis of ker D does not change E
            let again = right_pointers(&(&d * cplx(0.0, 1.0))).unwrap();
            prop_assert!((again.e - &ptr.e).norm() < 1e-9);
        }
    }
}
