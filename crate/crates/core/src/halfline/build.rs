//! Construction of the Wiener-Hopf, Hankel and `T_R` operators.
//!
//! Kernels are read at node lags `n h` with the lag-0 value halved (the mean
//! of the one-sided limits), which makes each block row a trapezoid rule for
//! the underlying integral.

use super::operator::DiscretizedOperator;
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::kernels::{convolve, CausalKernel, FullLineKernel, KernelRef, WienerPlusFunction};
use crate::matrix;
use crate::scalar::{CMat, Cplx, Real};
use num_complex::Complex;

fn check_kernel_grid<T: Real>(k: &CausalKernel<T>, grid: &TimeGrid<T>) -> Result<()> {
    if k.expsum().is_some() {
        return Ok(());
    }
    if let Some(s) = k.samples() {
        let h = grid.step();
        if (s.grid().step() - h).abs() > h * T::lit(1e-9) {
            return Err(Error::InvalidGrid(format!(
                "kernel sampled with step {} but the operator grid has step {}",
                s.grid().step(),
                h
            )));
        }
    }
    Ok(())
}

fn scale_all<T: Real>(v: &mut [Cplx<T>], s: T) {
    for z in v {
        *z = Complex::new(z.re * s, z.im * s);
    }
}

/// `T_F`: block `(i, j)` is `D_F delta_ij + h f((i - j) h)` with `f(0)`
/// halved and `f = 0` on negative lags.
pub fn build_wiener_hopf<T: Real>(f: &WienerPlusFunction<T>, grid: &TimeGrid<T>) -> Result<DiscretizedOperator<T>> {
    wiener_hopf_named(f, grid, "T_F")
}

pub fn wiener_hopf_named<T: Real>(
    f: &WienerPlusFunction<T>,
    grid: &TimeGrid<T>,
    name: &str,
) -> Result<DiscretizedOperator<T>> {
    check_kernel_grid(f.kernel(), grid)?;
    let (m, p) = (f.rows(), f.cols());
    let n = grid.count();
    let h = grid.step();
    let mut lags = f.kernel().node_values(h, n);
    scale_all(&mut lags, h);
    let b = m * p;
    let half = T::lit(0.5);
    for (z, d) in lags[..b].iter_mut().zip(f.constant().as_slice()) {
        *z = Complex::new(z.re * half, z.im * half) + *d;
    }
    DiscretizedOperator::toeplitz(m, p, *grid, 0, lags, name)
}

/// Wiener-Hopf operator of a full-line symbol `D_R + r`.
pub fn wiener_hopf_full_line<T: Real>(
    constant: &CMat<T>,
    r: &FullLineKernel<T>,
    grid: &TimeGrid<T>,
    name: &str,
) -> Result<DiscretizedOperator<T>> {
    let n = grid.count();
    if r.half_width() + 1 < n || (r.step() - grid.step()).abs() > grid.step() * T::lit(1e-12) {
        return Err(Error::InvalidGrid("full-line kernel does not cover the grid".into()));
    }
    let (m, p) = (r.rows(), r.cols());
    let b = m * p;
    let mut lags = Vec::with_capacity((2 * n - 1) * b);
    for lag in -(n as isize - 1)..=(n as isize - 1) {
        lags.extend_from_slice(r.lag(lag));
    }
    scale_all(&mut lags, grid.step());
    let zero_at = (n - 1) * b;
    for (z, d) in lags[zero_at..zero_at + b].iter_mut().zip(constant.as_slice()) {
        *z += *d;
    }
    DiscretizedOperator::toeplitz(m, p, *grid, -(n as isize - 1), lags, name)
}

pub fn build_adjoint<T: Real>(t: &DiscretizedOperator<T>) -> DiscretizedOperator<T> {
    t.adjoint()
}

/// `H_G`: block `(i, l)` is `h g((i + l + 1) h)`, exact beyond the horizon
/// for exponential sums and zero otherwise.
pub fn build_hankel<T: Real>(g: &CausalKernel<T>, grid: &TimeGrid<T>) -> Result<DiscretizedOperator<T>> {
    check_kernel_grid(g, grid)?;
    let n = grid.count();
    let h = grid.step();
    let b = g.rows() * g.cols();
    let values = g.node_values(h, 2 * n);
    let mut anti = values[b..].to_vec();
    scale_all(&mut anti, h);
    DiscretizedOperator::hankel(g.rows(), g.cols(), *grid, anti, "H_G")
}

/// Symbol of `R = G G~`: constant `D D*` and full-line kernel
/// `r = D g* + g D* + g * g*`, computed on lags `|n| < N`.
pub fn tr_symbol<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>) -> Result<(CMat<T>, FullLineKernel<T>)> {
    let d = g.constant();
    let k = g.kernel();
    let ks = k.adjoint_flip();
    let causal = FullLineKernel::embed(KernelRef::Causal(k), grid).right_mul(&d.adjoint());
    let anti = FullLineKernel::embed(KernelRef::Anticausal(&ks), grid).left_mul(d);
    let conv = convolve(KernelRef::Causal(k), KernelRef::Anticausal(&ks), grid)?;
    let r = causal.add(&anti)?.add(&conv)?;
    Ok((d * d.adjoint(), r))
}

pub fn build_tr<T: Real>(g: &WienerPlusFunction<T>, grid: &TimeGrid<T>) -> Result<DiscretizedOperator<T>> {
    check_kernel_grid(g.kernel(), grid)?;
    let (dr, r) = tr_symbol(g, grid)?;
    wiener_hopf_full_line(&dr, &r, grid, "T_R")
}

/// `T_G T_G*`, materialized and Hermitized when small.
pub fn build_tg_tgstar<T: Real>(tg: &DiscretizedOperator<T>) -> Result<DiscretizedOperator<T>> {
    let p = tg.compose(&tg.adjoint())?;
    Ok(p.materialize_if_small().hermitized().with_provenance(format!("{} {}*", tg.provenance(), tg.provenance())))
}

/// Sizes of `T_R - (T_G T_G* + H_G H_G*)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionResidual<T> {
    pub frobenius: T,
    pub spectral: T,
    /// Frobenius residual divided by `||T_R||_F`.
    pub relative_frobenius: T,
    /// `true` when the Frobenius norms are stochastic estimates.
    pub estimated: bool,
}

pub fn decomposition_residual<T: Real>(
    g: &WienerPlusFunction<T>,
    grid: &TimeGrid<T>,
) -> Result<DecompositionResidual<T>> {
    let tg = wiener_hopf_named(g, grid, "T_G")?;
    let hg = build_hankel(g.kernel(), grid)?;
    let tr = build_tr(g, grid)?;
    let one = Complex::new(T::one(), T::zero());
    let ttstar = tg.compose(&tg.adjoint())?;
    let hhstar = hg.compose(&hg.adjoint())?;
    let diff = DiscretizedOperator::linear_combination(&[(one, &tr), (-one, &ttstar), (-one, &hhstar)], "T_R - T_G T_G* - H_G H_G*")?;
    if diff.is_small() {
        let dd = diff.to_dense();
        let fro = matrix::frobenius(&dd);
        let tr_fro = matrix::frobenius(&tr.to_dense());
        let spectral = if fro == T::zero() { T::zero() } else { matrix::spectral_norm(&dd) };
        return Ok(DecompositionResidual {
            frobenius: fro,
            spectral,
            relative_frobenius: if tr_fro > T::zero() { fro / tr_fro } else { fro },
            estimated: false,
        });
    }
    let fro = super::spectrum::frobenius_estimate(&diff, 24);
    let tr_fro = super::spectrum::frobenius_estimate(&tr, 24);
    // the difference is Hermitian only up to rounding of terms that cancel,
    // so take the general spectral norm
    let spectral = super::spectrum::spectral_norm(&diff)?;
    Ok(DecompositionResidual {
        frobenius: fro,
        spectral,
        relative_frobenius: if tr_fro > T::zero() { fro / tr_fro } else { fro },
        estimated: true,
    })
}

/// Samples a kernel on the operator lattice (cell midpoints) as a block
/// vector per column: returns an `(rows N) x cols` matrix whose column `c`
/// holds `k(t_j) e_c`.
pub fn kernel_columns<T: Real>(k: &CausalKernel<T>, grid: &TimeGrid<T>) -> CMat<T> {
    let s = k.sample(*grid, Placement::Cells);
    let (m, p, n) = (k.rows(), k.cols(), grid.count());
    let mut out = CMat::zeros(m * n, p);
    for j in 0..n {
        let blk = s.block(j);
        for c in 0..p {
            for r in 0..m {
                out[(j * m + r, c)] = blk[r + c * m];
            }
        }
    }
    out
}

/// Inverse of [`kernel_columns`].
pub fn columns_to_kernel<T: Real>(cols: &CMat<T>, rows: usize, grid: &TimeGrid<T>) -> Result<CausalKernel<T>> {
    let n = grid.count();
    let p = cols.ncols();
    if cols.nrows() != rows * n {
        return Err(Error::DimensionMismatch("column length does not match the grid".into()));
    }
    let mut values = Vec::with_capacity(n * rows * p);
    for j in 0..n {
        for c in 0..p {
            for r in 0..rows {
                values.push(cols[(j * rows + r, c)]);
            }
        }
    }
    let s = crate::kernels::Samples::new(*grid, Placement::Cells, rows, p, values)?;
    Ok(CausalKernel::from_samples(s))
}
