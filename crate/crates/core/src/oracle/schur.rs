//! `y` through `T_R^{-1}` and a low-rank Hankel correction instead of a
//! direct solve with `T_G T_G*`.

use crate::error::Result;
use crate::grid::{Placement, TimeGrid};
use crate::halfline::build::{build_hankel, build_tr, columns_to_kernel, kernel_columns, wiener_hopf_named};
use crate::halfline::spd_solve;
use crate::kernels::{CausalKernel, ExpSum, Samples, WienerPlusFunction};
use crate::matrix;
use crate::scalar::Real;
use crate::solver::{CertifyConfig, SchurFactors};

/// Schur-path `y` together with the smallest eigenvalue of
/// `I - H_G* T_R^{-1} H_G` found on the way.
#[derive(Clone, Debug)]
pub struct SchurPath<T: Real> {
    pub y: CausalKernel<T>,
    pub lambda_schur: T,
    pub hankel_rank: usize,
}

/// `f = T_R^{-1} g + P C (I - M C)^{-1} Q* T_R^{-1} g` and `y = T_G* f`,
/// where `H_G ~ Q B`, `C = B B*`, `P = T_R^{-1} Q`, `M = Q* P`.
pub fn schur_path_y<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>, cfg: &CertifyConfig) -> Result<SchurPath<T>> {
    let p = g.cols();
    if g.kernel().is_zero() {
        let y = CausalKernel::from_parts(Samples::zero(*grid, Placement::Cells, p, p), ExpSum::zero(p, p))?;
        return Ok(SchurPath { y, lambda_schur: T::one(), hankel_rank: 0 });
    }
    let tr = build_tr(g, grid)?;
    let hg = build_hankel(g.kernel(), grid)?;
    let f = SchurFactors::new(&tr, &hg, cfg)?;
    let lambda_schur = f.schur_min_eigenvalue()?;
    let rhs = kernel_columns(g.kernel(), grid);
    let base = spd_solve(&tr, &rhs, &cfg.solve)?.x;
    let fcols = if f.rank() == 0 {
        base
    } else {
        let k = f.rank();
        let core = matrix::identity::<T>(k) - &f.m * &f.c;
        let inner = matrix::inverse_checked(&core, 1e14)?;
        let corr = &f.p * (&f.c * (inner * (f.q.adjoint() * &base)));
        base + corr
    };
    let tg = wiener_hopf_named(g, grid, "T_G")?;
    let ycols = tg.adjoint().apply_columns(&fcols);
    let y = columns_to_kernel(&ycols, p, grid)?;
    Ok(SchurPath { y, lambda_schur, hankel_rank: f.rank() })
}

/// `max |a - b| / max |b|` over two sampled kernels on the same lattice.
pub fn relative_sample_difference<T: Real>(a: &CausalKernel<T>, b: &CausalKernel<T>) -> Option<T> {
    let (sa, sb) = (a.samples()?, b.samples()?);
    if !sa.same_lattice(sb) || sa.values().len() != sb.values().len() {
        return None;
    }
    let mut diff = T::zero();
    let mut scale = T::zero();
    for (x, y) in sa.values().iter().zip(sb.values()) {
        diff = diff.max(crate::scalar::cabs(*x - *y));
        scale = scale.max(crate::scalar::cabs(*y));
    }
    Some(if scale > T::zero() { diff / scale } else { diff })
}
