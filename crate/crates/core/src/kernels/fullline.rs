//! Kernels on the whole line and trapezoid convolution.
//!
//! Sampled full-line kernels live on node lags `n h`, `|n| <= half_width`.
//! The lag-0 sample holds the average of the one-sided limits, so a causal
//! kernel embeds with `g(0)/2` at the origin. With that convention the
//! rectangle sum `h sum_j f(t - jh) g(jh)` is the composite trapezoid rule for
//! the convolution integral, including across the jumps at the origin.

use super::causal::{AnticausalKernel, CausalKernel};
use super::expsum::{ExpSum, ExpTerm};
use super::samples::Samples;
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::matrix::{self, zeros};
use crate::scalar::{cexp, cinv, CMat, Cplx, Real};
use num_complex::Complex;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub enum KernelRef<'a, T: Real> {
    Causal(&'a CausalKernel<T>),
    Anticausal(&'a AnticausalKernel<T>),
}

impl<'a, T: Real> KernelRef<'a, T> {
    fn rows(&self) -> usize {
        match self {
            KernelRef::Causal(k) => k.rows(),
            KernelRef::Anticausal(k) => k.rows(),
        }
    }

    fn cols(&self) -> usize {
        match self {
            KernelRef::Causal(k) => k.cols(),
            KernelRef::Anticausal(k) => k.cols(),
        }
    }

    /// Midpoint-convention node sequence on `[lo, hi]` (in lag units) with
    /// `len` nonzero lags on the supported side.
    fn sequence(&self, step: T, len: usize) -> LagSequence<T> {
        let half = T::lit(0.5);
        let (mut values, lo) = match self {
            KernelRef::Causal(k) => (k.node_values(step, len), 0isize),
            KernelRef::Anticausal(k) => {
                let mut v = k.mirror().node_values(step, len);
                let b = k.rows() * k.cols();
                // reverse block order: index 0 <-> lag -(len-1)
                let mut out = Vec::with_capacity(v.len());
                for j in (0..len).rev() {
                    out.extend_from_slice(&v[j * b..(j + 1) * b]);
                }
                v = out;
                (v, -(len as isize - 1))
            }
        };
        let b = self.rows() * self.cols();
        let zero_index = (-lo) as usize;
        for z in &mut values[zero_index * b..(zero_index + 1) * b] {
            *z = Complex::new(z.re * half, z.im * half);
        }
        LagSequence { lo, values, block: b }
    }

    fn expsum_parts(&self) -> Option<(ExpSum<T>, ExpSum<T>)> {
        match self {
            KernelRef::Causal(k) => k.expsum().map(|e| (e.clone(), ExpSum::zero(e.cols(), e.rows()))),
            KernelRef::Anticausal(k) => k.mirror().expsum().map(|e| (ExpSum::zero(e.rows(), e.cols()), e.clone())),
        }
    }
}

struct LagSequence<T: Real> {
    lo: isize,
    values: Vec<Cplx<T>>,
    block: usize,
}

impl<T: Real> LagSequence<T> {
    fn hi(&self) -> isize {
        self.lo + (self.values.len() / self.block.max(1)) as isize - 1
    }

    fn at(&self, n: isize) -> &[Cplx<T>] {
        let i = (n - self.lo) as usize;
        &self.values[i * self.block..(i + 1) * self.block]
    }
}

/// Exact full-line exponential form: `causal` on `t > 0`, and
/// `anticausal_mirror(-t)` on `t < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullLineExact<T: Real> {
    pub causal: ExpSum<T>,
    pub anticausal_mirror: ExpSum<T>,
}

impl<T: Real> FullLineExact<T> {
    pub fn eval(&self, t: T) -> CMat<T> {
        if t > T::zero() {
            self.causal.eval(t)
        } else if t < T::zero() {
            self.anticausal_mirror.eval(-t)
        } else {
            let half = Complex::new(T::lit(0.5), T::zero());
            matrix::scale(&(self.causal.eval(t) + self.anticausal_mirror.eval(t)), half)
        }
    }

    /// `int_R e^{-i w t} k(t) dt`.
    pub fn fourier(&self, omega: T) -> CMat<T> {
        let s = Complex::new(T::zero(), omega);
        self.causal.transform(s) + self.anticausal_mirror.transform(-s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullLineKernel<T: Real> {
    rows: usize,
    cols: usize,
    step: T,
    half_width: usize,
    values: Vec<Cplx<T>>,
    exact: Option<FullLineExact<T>>,
}

impl<T: Real> FullLineKernel<T> {
    pub fn zero(rows: usize, cols: usize, step: T, half_width: usize) -> Self {
        Self {
            rows,
            cols,
            step,
            half_width,
            values: vec![Complex::new(T::zero(), T::zero()); (2 * half_width + 1) * rows * cols],
            exact: Some(FullLineExact { causal: ExpSum::zero(rows, cols), anticausal_mirror: ExpSum::zero(rows, cols) }),
        }
    }

    /// Embeds a causal or anticausal kernel on lags `|n| < grid.count()`.
    pub fn embed(k: KernelRef<'_, T>, grid: &TimeGrid<T>) -> Self {
        let n = grid.count();
        let seq = k.sequence(grid.step(), n);
        let mut out = Self::zero(k.rows(), k.cols(), grid.step(), n - 1);
        for lag in seq.lo..=seq.hi() {
            out.lag_mut(lag).copy_from_slice(seq.at(lag));
        }
        out.exact = k.expsum_parts().map(|(c, a)| match k {
            KernelRef::Causal(_) => FullLineExact { causal: c, anticausal_mirror: ExpSum::zero(k.rows(), k.cols()) },
            KernelRef::Anticausal(_) => FullLineExact { causal: ExpSum::zero(k.rows(), k.cols()), anticausal_mirror: a },
        });
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn exact(&self) -> Option<&FullLineExact<T>> {
        self.exact.as_ref()
    }

    pub fn lag(&self, n: isize) -> &[Cplx<T>] {
        let b = self.rows * self.cols;
        let i = (n + self.half_width as isize) as usize;
        &self.values[i * b..(i + 1) * b]
    }

    fn lag_mut(&mut self, n: isize) -> &mut [Cplx<T>] {
        let b = self.rows * self.cols;
        let i = (n + self.half_width as isize) as usize;
        &mut self.values[i * b..(i + 1) * b]
    }

    pub fn value(&self, n: isize) -> CMat<T> {
        CMat::from_column_slice(self.rows, self.cols, self.lag(n))
    }

    /// Flat blocks for lags `-half_width..=half_width`.
    pub fn lag_values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols, self.half_width) != (other.rows, other.cols, other.half_width)
            || (self.step - other.step).abs() > self.step * T::lit(1e-12)
        {
            return Err(Error::DimensionMismatch("full-line kernels on different lattices".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(FullLineExact {
                causal: a.causal.add(&b.causal)?,
                anticausal_mirror: a.anticausal_mirror.add(&b.anticausal_mirror)?,
            }),
            _ => None,
        };
        Ok(Self { values, exact, ..self.clone() })
    }

    pub fn left_mul(&self, a: &CMat<T>) -> Self {
        let b_in = self.rows * self.cols;
        let mut values = Vec::with_capacity((2 * self.half_width + 1) * a.nrows() * self.cols);
        for i in 0..2 * self.half_width + 1 {
            let blk = CMat::from_column_slice(self.rows, self.cols, &self.values[i * b_in..(i + 1) * b_in]);
            values.extend_from_slice((a * blk).as_slice());
        }
        Self {
            rows: a.nrows(),
            cols: self.cols,
            step: self.step,
            half_width: self.half_width,
            values,
            exact: self.exact.as_ref().map(|e| FullLineExact {
                causal: e.causal.left_mul(a),
                anticausal_mirror: e.anticausal_mirror.left_mul(a),
            }),
        }
    }

    pub fn right_mul(&self, b: &CMat<T>) -> Self {
        let b_in = self.rows * self.cols;
        let mut values = Vec::with_capacity((2 * self.half_width + 1) * self.rows * b.ncols());
        for i in 0..2 * self.half_width + 1 {
            let blk = CMat::from_column_slice(self.rows, self.cols, &self.values[i * b_in..(i + 1) * b_in]);
            values.extend_from_slice((blk * b).as_slice());
        }
        Self {
            rows: self.rows,
            cols: b.ncols(),
            step: self.step,
            half_width: self.half_width,
            values,
            exact: self.exact.as_ref().map(|e| FullLineExact {
                causal: e.causal.right_mul(b),
                anticausal_mirror: e.anticausal_mirror.right_mul(b),
            }),
        }
    }

    /// Fourier transform on the axis: exact if available, else the trapezoid
    /// sum over the sampled lags.
    pub fn fourier(&self, omega: T) -> CMat<T> {
        if let Some(e) = &self.exact {
            return e.fourier(omega);
        }
        let mut out = zeros::<T>(self.rows, self.cols);
        let h = self.step;
        for n in -(self.half_width as isize)..=self.half_width as isize {
            let t = h * T::lit(n as f64);
            let w = cexp(Complex::new(T::zero(), -omega * t)) * Complex::new(h, T::zero());
            for (o, v) in out.iter_mut().zip(self.lag(n)) {
                *o += w * *v;
            }
        }
        out
    }

    /// `(sum over lags n > 0 of ||k||^2 h, sum over n < 0, value at 0)`:
    /// support diagnostics.
    pub fn side_masses(&self) -> (T, T) {
        let h = self.step;
        let mut pos = T::zero();
        let mut neg = T::zero();
        for n in 1..=self.half_width as isize {
            let a = super::samples::block_norm(self.lag(n));
            let b = super::samples::block_norm(self.lag(-n));
            pos += a * a * h;
            neg += b * b * h;
        }
        (pos, neg)
    }

    /// Causal part as a kernel on node lags `0..=half_width`, with the lag-0
    /// value restored to the right limit (twice the midpoint value).
    pub fn causal_part(&self) -> CausalKernel<T> {
        let grid = TimeGrid::new(self.step, self.half_width + 1).expect("valid lattice");
        let b = self.rows * self.cols;
        let mut values = Vec::with_capacity((self.half_width + 1) * b);
        let two = T::lit(2.0);
        for n in 0..=self.half_width as isize {
            if n == 0 {
                values.extend(self.lag(0).iter().map(|z| Complex::new(z.re * two, z.im * two)));
            } else {
                values.extend_from_slice(self.lag(n));
            }
        }
        let s = Samples::new(grid, Placement::Nodes, self.rows, self.cols, values).expect("consistent sizes");
        CausalKernel::from_samples(s)
    }
}

fn exact_convolution<T: Real>(f: KernelRef<'_, T>, g: KernelRef<'_, T>) -> Option<FullLineExact<T>> {
    let (fc, fa) = f.expsum_parts()?;
    let (gc, ga) = g.expsum_parts()?;
    let (m, q) = (f.rows(), g.cols());
    let mut causal = ExpSum::zero(m, q);
    let mut mirror = ExpSum::zero(m, q);
    match (f, g) {
        (KernelRef::Causal(_), KernelRef::Causal(_)) => {
            causal = fc.convolve(&gc)?;
        }
        (KernelRef::Anticausal(_), KernelRef::Anticausal(_)) => {
            mirror = fa.convolve(&ga)?;
        }
        (KernelRef::Causal(_), KernelRef::Anticausal(_)) => {
            let mut ct = Vec::new();
            let mut mt = Vec::new();
            for c in fc.terms() {
                for b in ga.terms() {
                    let w = cinv(c.rate + b.rate);
                    let coeff = matrix::scale(&(&c.coeff * &b.coeff), w);
                    ct.push(ExpTerm { coeff: coeff.clone(), rate: c.rate });
                    mt.push(ExpTerm { coeff, rate: b.rate });
                }
            }
            causal = ExpSum::new(m, q, ct).ok()?;
            mirror = ExpSum::new(m, q, mt).ok()?;
        }
        (KernelRef::Anticausal(_), KernelRef::Causal(_)) => {
            let mut ct = Vec::new();
            let mut mt = Vec::new();
            for b in fa.terms() {
                for c in gc.terms() {
                    let w = cinv(c.rate + b.rate);
                    let coeff = matrix::scale(&(&b.coeff * &c.coeff), w);
                    ct.push(ExpTerm { coeff: coeff.clone(), rate: c.rate });
                    mt.push(ExpTerm { coeff, rate: b.rate });
                }
            }
            causal = ExpSum::new(m, q, ct).ok()?;
            mirror = ExpSum::new(m, q, mt).ok()?;
        }
    }
    Some(FullLineExact { causal, anticausal_mirror: mirror })
}

/// Trapezoid convolution `(f * g)(t) = int f(t - tau) g(tau) dtau` on node
/// lags `|n| < grid.count()`. Inputs are read on lags up to `2 (count - 1)`
/// (exact values for exponential sums, zero past a sampled horizon). When both
/// inputs carry exponential sums with disjoint poles, the exact result is
/// attached as well.
pub fn convolve<T: Real>(
    f: KernelRef<'_, T>,
    g: KernelRef<'_, T>,
    grid: &TimeGrid<T>,
) -> Result<FullLineKernel<T>> {
    if f.cols() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "convolving {}x{} with {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let (m, p, q) = (f.rows(), f.cols(), g.cols());
    let n_out = grid.count();
    let len = 2 * (n_out - 1) + 1;
    let h = grid.step();
    let fs = f.sequence(h, len);
    let gs = g.sequence(h, len);
    let half = n_out as isize - 1;
    let bo = m * q;
    let mut out = FullLineKernel::zero(m, q, h, n_out - 1);
    out.values
        .par_chunks_mut(bo.max(1))
        .enumerate()
        .for_each(|(idx, blk)| {
            if bo == 0 {
                return;
            }
            let n = idx as isize - half;
            let j_lo = gs.lo.max(n - fs.hi());
            let j_hi = gs.hi().min(n - fs.lo);
            let mut acc = vec![Complex::new(T::zero(), T::zero()); bo];
            let mut j = j_lo;
            while j <= j_hi {
                let a = fs.at(n - j);
                let b = gs.at(j);
                // column-major: acc[r + c m] += sum_k a[r + k m] b[k + c p]
                for c in 0..q {
                    for k in 0..p {
                        let bv = b[k + c * p];
                        if bv.re == T::zero() && bv.im == T::zero() {
                            continue;
                        }
                        for r in 0..m {
                            acc[r + c * m] += a[r + k * m] * bv;
                        }
                    }
                }
                j += 1;
            }
            for (o, v) in blk.iter_mut().zip(acc) {
                *o = Complex::new(v.re * h, v.im * h);
            }
        });
    out.exact = exact_convolution(f, g);
    Ok(out)
}

/// Causal convolution sampled on `(grid, placement)`. Returns the exact
/// partial-fraction form when both inputs are exponential sums with distinct
/// poles; otherwise the trapezoid sum with `f` on the lattice and `g` on
/// node lags.
pub fn convolve_causal<T: Real>(
    f: &CausalKernel<T>,
    g: &CausalKernel<T>,
    grid: TimeGrid<T>,
    placement: Placement,
) -> Result<CausalKernel<T>> {
    if f.cols() != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "convolving {}x{} with {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    if let (Some(a), Some(b)) = (f.expsum(), g.expsum()) {
        if let Some(c) = a.convolve(b) {
            return Ok(CausalKernel::from_expsum(c));
        }
    }
    let (m, p, q) = (f.rows(), f.cols(), g.cols());
    let n = grid.count();
    let h = grid.step();
    let fs = f.sample(grid, placement);
    let gs = g.node_values(h, n);
    let half = T::lit(0.5);
    let bo = m * q;
    let mut values = vec![Complex::new(T::zero(), T::zero()); n * bo];
    values.par_chunks_mut(bo.max(1)).enumerate().for_each(|(i, blk)| {
        if bo == 0 {
            return;
        }
        let mut acc = vec![Complex::new(T::zero(), T::zero()); bo];
        for j in 0..=i {
            let mut w = T::one();
            if j == 0 && placement == Placement::Nodes {
                w *= half;
            }
            if i == j {
                w *= half;
            }
            let a = fs.block(j);
            let b = &gs[(i - j) * p * q..(i - j + 1) * p * q];
            for c in 0..q {
                for k in 0..p {
                    let bv = b[k + c * p] * Complex::new(w, T::zero());
                    for r in 0..m {
                        acc[r + c * m] += a[r + k * m] * bv;
                    }
                }
            }
        }
        for (o, v) in blk.iter_mut().zip(acc) {
            *o = Complex::new(v.re * h, v.im * h);
        }
    });
    Ok(CausalKernel::from_samples(Samples::new(grid, placement, m, q, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;

    fn scalar_exp() -> CausalKernel<f64> {
        CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[1.0]]), cplx(1.0, 0.0)).unwrap())
    }

    fn row_kernel() -> CausalKernel<f64> {
        CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap())
    }

    #[test]
    fn zero_convolution() {
        let grid = TimeGrid::from_horizon(0.1, 5.0).unwrap();
        let z = CausalKernel::<f64>::zero(1, 1);
        let k = scalar_exp();
        let c = convolve(KernelRef::Causal(&z), KernelRef::Causal(&k), &grid).unwrap();
        assert!(c.lag_values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn causal_self_convolution_is_t_exp() {
        let grid = TimeGrid::from_horizon(0.01, 10.0).unwrap();
        let k = scalar_exp();
        let c = convolve(KernelRef::Causal(&k), KernelRef::Causal(&k), &grid).unwrap();
        let at1 = c.value(100)[(0, 0)].re;
        // independent check: trapezoid of e^{-(1-tau)} e^{-tau} over [0,1] is exactly e^{-1}
        assert!((at1 - (-1.0f64).exp()).abs() < 1e-5, "{at1}");
        assert!(c.value(-5)[(0, 0)].norm() == 0.0);
        // the exact form falls back (double pole), samples remain
        assert!(c.exact().is_none());
        let (pos, neg) = c.side_masses();
        assert!(pos > 0.0 && neg == 0.0);
    }

    #[test]
    fn kernel_times_its_flip_is_two_sided_exponential() {
        let grid = TimeGrid::from_horizon(0.01, 10.0).unwrap();
        let g = row_kernel();
        let gs = g.adjoint_flip();
        let c = convolve(KernelRef::Causal(&g), KernelRef::Anticausal(&gs), &grid).unwrap();
        assert_eq!((c.rows(), c.cols()), (1, 1));
        for &n in &[-300isize, -50, -1, 1, 50, 300] {
            let t = n as f64 * 0.01;
            let expect = 0.5 * (-t.abs()).exp();
            assert!((c.value(n)[(0, 0)].re - expect).abs() < 2e-5, "n={n}");
        }
        // at lag 0 both factors sit at their midpoint values, which costs h/4
        assert!((c.value(0)[(0, 0)].re - (0.5 - 0.0025)).abs() < 2e-5);
        let exact = c.exact().unwrap();
        assert!((exact.eval(0.7)[(0, 0)].re - 0.5 * (-0.7f64).exp()).abs() < 1e-14);
        assert!((exact.eval(-0.7)[(0, 0)].re - 0.5 * (-0.7f64).exp()).abs() < 1e-14);
        // Fourier transform of e^{-|t|}/2 is 1/(1 + w^2)
        assert!((exact.fourier(0.0)[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((c.fourier_sampled_for_test(2.0) - 0.2).abs() < 1e-4);
    }

    impl FullLineKernel<f64> {
        fn fourier_sampled_for_test(&self, w: f64) -> f64 {
            let mut plain = self.clone();
            plain.exact = None;
            plain.fourier(w)[(0, 0)].re
        }
    }

    #[test]
    fn causal_convolution_on_cells_matches_closed_form() {
        let grid = TimeGrid::from_horizon(0.01, 10.0).unwrap();
        let f = scalar_exp().to_sampled(grid, Placement::Cells);
        let g = CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[1.0]]), cplx(2.0, 0.0)).unwrap());
        let c = convolve_causal(&f, &g, grid, Placement::Cells).unwrap();
        let s = c.samples().unwrap();
        for &j in &[0usize, 10, 100, 500] {
            let t = s.time(j);
            let expect = (-t).exp() - (-2.0 * t).exp();
            assert!((s.value(j)[(0, 0)].re - expect).abs() < 1e-4, "j={j}");
        }
        // exact path
        let e = convolve_causal(&scalar_exp(), &g, grid, Placement::Cells).unwrap();
        assert!(e.expsum().is_some());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let grid = TimeGrid::from_horizon(0.1, 1.0).unwrap();
        let g = row_kernel();
        assert!(convolve(KernelRef::Causal(&g), KernelRef::Causal(&g), &grid).is_err());
    }
}
