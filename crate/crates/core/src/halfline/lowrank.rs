//! Randomized range finder for numerically low-rank operators.

use super::operator::DiscretizedOperator;
use super::spectrum::{dot, norm, random_vector};
use crate::scalar::{CMat, Cplx, Real};
use num_complex::Complex;

/// `A ~ Q B` with orthonormal `Q` (`nrows x k`) and `B = Q* A` (`k x ncols`).
#[derive(Clone, Debug)]
pub struct LowRank<T: Real> {
    pub q: CMat<T>,
    pub b: CMat<T>,
}

impl<T: Real> LowRank<T> {
    pub fn rank(&self) -> usize {
        self.q.ncols()
    }
}

/// Grows an orthonormal basis of `range(A)` from random probes until a full
/// block of new probes leaves residuals below `rtol` times the largest probe
/// image, or `max_rank` is reached.
pub fn range_finder<T: Real>(op: &DiscretizedOperator<T>, rtol: T, max_rank: usize) -> LowRank<T> {
    const BLOCK: usize = 8;
    let n = op.nrows();
    let cap = max_rank.min(n).min(op.ncols());
    let mut basis: Vec<Vec<Cplx<T>>> = Vec::new();
    let mut scale = T::zero();
    let mut seed = 0x7a11u64;
    while basis.len() < cap {
        let mut accepted = 0;
        let mut block_max = T::zero();
        for _ in 0..BLOCK {
            seed += 1;
            let omega = random_vector::<T>(op.ncols(), seed);
            let mut y = op.apply(&omega);
            scale = scale.max(norm(&y));
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &y);
                    for (yi, vi) in y.iter_mut().zip(v) {
                        *yi -= c * *vi;
                    }
                }
            }
            let r = norm(&y);
            block_max = block_max.max(r);
            if r > rtol * scale && r > T::zero() && basis.len() < cap {
                for z in &mut y {
                    *z /= Complex::new(r, T::zero());
                }
                basis.push(y);
                accepted += 1;
            }
        }
        if accepted == 0 || block_max <= rtol * scale {
            break;
        }
    }
    let k = basis.len();
    let mut q = CMat::zeros(n, k);
    for (c, v) in basis.iter().enumerate() {
        q.column_mut(c).copy_from_slice(v);
    }
    let adj = op.adjoint();
    let bt = adj.apply_columns(&q);
    LowRank { q, b: bt.adjoint() }
}
