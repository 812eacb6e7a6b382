//! Uniformly sampled matrix functions on the half line and the quadrature
//! rules that act on them.
//!
//! Blocks are stored flat, one column-major `rows x cols` block per sample.

use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::matrix::zeros;
use crate::scalar::{cexp, CMat, Cplx, Real};
use num_complex::Complex;

#[derive(Clone, Debug, PartialEq)]
pub struct Samples<T: Real> {
    grid: TimeGrid<T>,
    placement: Placement,
    rows: usize,
    cols: usize,
    values: Vec<Cplx<T>>,
}

impl<T: Real> Samples<T> {
    pub fn new(
        grid: TimeGrid<T>,
        placement: Placement,
        rows: usize,
        cols: usize,
        values: Vec<Cplx<T>>,
    ) -> Result<Self> {
        if values.len() != grid.count() * rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} sample entries, got {}",
                grid.count() * rows * cols,
                values.len()
            )));
        }
        if values.iter().any(|z| !crate::scalar::cplx_finite(*z)) {
            return Err(Error::InvalidKernel("non-finite sample".into()));
        }
        Ok(Self { grid, placement, rows, cols, values })
    }

    pub fn from_fn(
        grid: TimeGrid<T>,
        placement: Placement,
        rows: usize,
        cols: usize,
        f: impl Fn(T) -> CMat<T>,
    ) -> Self {
        let block = rows * cols;
        let mut values = Vec::with_capacity(grid.count() * block);
        for j in 0..grid.count() {
            let v = f(grid.time(placement, j));
            debug_assert_eq!(v.shape(), (rows, cols));
            values.extend_from_slice(v.as_slice());
        }
        Self { grid, placement, rows, cols, values }
    }

    pub fn zero(grid: TimeGrid<T>, placement: Placement, rows: usize, cols: usize) -> Self {
        Self {
            grid,
            placement,
            rows,
            cols,
            values: vec![Complex::new(T::zero(), T::zero()); grid.count() * rows * cols],
        }
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.grid.count()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count() == 0
    }

    pub fn time(&self, j: usize) -> T {
        self.grid.time(self.placement, j)
    }

    /// Last sample time.
    pub fn end(&self) -> T {
        self.time(self.len() - 1)
    }

    pub fn block(&self, j: usize) -> &[Cplx<T>] {
        let b = self.rows * self.cols;
        &self.values[j * b..(j + 1) * b]
    }

    pub fn value(&self, j: usize) -> CMat<T> {
        CMat::from_column_slice(self.rows, self.cols, self.block(j))
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn map_blocks(&self, rows: usize, cols: usize, f: impl Fn(&CMat<T>) -> CMat<T>) -> Self {
        Self::from_index_fn(self.grid, self.placement, rows, cols, |j| f(&self.value(j)))
    }

    fn from_index_fn(
        grid: TimeGrid<T>,
        placement: Placement,
        rows: usize,
        cols: usize,
        f: impl Fn(usize) -> CMat<T>,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.count() * rows * cols);
        for j in 0..grid.count() {
            values.extend_from_slice(f(j).as_slice());
        }
        Self { grid, placement, rows, cols, values }
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        self.grid == other.grid && self.placement == other.placement
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>) -> Result<Self> {
        if !self.same_lattice(other) || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sample sets on different lattices".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { values, ..self.clone() })
    }

    /// Cubic Lagrange interpolation on the sample lattice. Points before the
    /// first sample are extrapolated from the first four; points past the last
    /// sample (by more than rounding) are outside the support and yield zero.
    pub fn interpolate(&self, t: T) -> CMat<T> {
        let mut out = zeros(self.rows, self.cols);
        let n = self.len();
        let h = self.grid.step();
        let x = t / h - self.placement.offset::<T>();
        let last = T::from_usize_lossy(n - 1);
        if x > last + T::lit(1e-9) || x < -T::lit(1.0) {
            return out;
        }
        let xf = x.as_f64();
        let width = n.min(4);
        let base = (xf.floor() as isize - 1).clamp(0, (n - width) as isize) as usize;
        let slice = out.as_mut_slice();
        for a in 0..width {
            let xa = (base + a) as f64;
            let mut w = 1.0;
            for b in 0..width {
                if b != a {
                    let xb = (base + b) as f64;
                    w *= (xf - xb) / (xa - xb);
                }
            }
            let w = T::lit(w);
            for (o, v) in slice.iter_mut().zip(self.block(base + a)) {
                *o += Complex::new(v.re * w, v.im * w);
            }
        }
        out
    }

    /// Resamples onto another lattice by cubic interpolation.
    pub fn resample(&self, grid: TimeGrid<T>, placement: Placement) -> Self {
        if grid == self.grid && placement == self.placement {
            return self.clone();
        }
        Self::from_fn(grid, placement, self.rows, self.cols, |t| self.interpolate(t))
    }

    /// Quadrature weight of sample `j` for integrals over the sampled range:
    /// trapezoid on nodes, midpoint on cells.
    pub fn weight(&self, j: usize) -> T {
        let h = self.grid.step();
        match self.placement {
            Placement::Nodes if j == 0 || j + 1 == self.len() => h * T::lit(0.5),
            _ => h,
        }
    }

    /// `int_0^end e^{-st} g(t) dt` for the piecewise-linear interpolant of the
    /// samples (extended linearly down to t = 0 on the cell lattice). This is
    /// the trapezoid rule at s = 0 and stays accurate when |s| h is large.
    pub fn transform(&self, s: Cplx<T>) -> CMat<T> {
        let b = self.rows * self.cols;
        let n = self.len();
        let h = self.grid.step();
        let mut out = vec![Complex::new(T::zero(), T::zero()); b];
        if n == 0 || b == 0 {
            return CMat::from_column_slice(self.rows, self.cols, &out);
        }
        let (w0, w1) = linear_weights(s, h);
        let t0 = self.time(0);
        let ratio = cexp(-s * Complex::new(h, T::zero()));
        let mut e = cexp(-s * Complex::new(t0, T::zero()));
        // sum_j E_j (w0 f_j + w1 f_{j+1}) over the n - 1 regular segments
        for j in 0..n - 1 {
            if j % 256 == 0 && j > 0 {
                e = cexp(-s * Complex::new(self.time(j), T::zero()));
            }
            let fj = self.block(j);
            let fk = self.block(j + 1);
            let a = e * w0;
            let c = e * w1;
            for q in 0..b {
                out[q] += a * fj[q] + c * fk[q];
            }
            e *= ratio;
        }
        if self.placement == Placement::Cells && n >= 2 {
            // first half cell [0, h/2]: linear through the extrapolated f(0)
            let half = h * T::lit(0.5);
            let (v0, v1) = linear_weights(s, half);
            let f0 = self.block(0);
            let f1 = self.block(1);
            let one_half = T::lit(1.5);
            let minus_half = T::lit(-0.5);
            for q in 0..b {
                let start = Complex::new(
                    f0[q].re * one_half + f1[q].re * minus_half,
                    f0[q].im * one_half + f1[q].im * minus_half,
                );
                out[q] += v0 * start + v1 * f0[q];
            }
        }
        CMat::from_column_slice(self.rows, self.cols, &out)
    }

    /// `int ||g(t)||_F dt` over the sampled range.
    pub fn l1(&self) -> T {
        (0..self.len()).fold(T::zero(), |acc, j| acc + self.weight(j) * block_norm(self.block(j)))
    }

    /// `(int ||g(t)||_F^2 dt)^{1/2}` over the sampled range.
    pub fn l2(&self) -> T {
        (0..self.len())
            .fold(T::zero(), |acc, j| {
                let nrm = block_norm(self.block(j));
                acc + self.weight(j) * nrm * nrm
            })
            .sqrt()
    }

    /// `L^1` norm of each scalar entry, column-major.
    pub fn entry_l1(&self) -> Vec<T> {
        let b = self.rows * self.cols;
        let mut acc = vec![T::zero(); b];
        for j in 0..self.len() {
            let w = self.weight(j);
            for (a, v) in acc.iter_mut().zip(self.block(j)) {
                *a += w * v.re.hypot(v.im);
            }
        }
        acc
    }

    /// Heuristic estimate of `int_end^inf ||g||_F dt` from the geometric decay
    /// of the last two samples.
    pub fn tail_estimate(&self) -> T {
        let n = self.len();
        if n < 2 {
            return T::zero();
        }
        let last = block_norm(self.block(n - 1));
        if last == T::zero() {
            return T::zero();
        }
        let prev = block_norm(self.block(n - 2));
        let ratio = if prev > T::zero() { (last / prev).min(T::lit(0.999)) } else { T::lit(0.999) };
        last * self.grid.step() / (T::one() - ratio)
    }

    /// Integral of `||g||_F` over samples with `t >= from`.
    pub fn l1_from(&self, from: T) -> T {
        (0..self.len())
            .filter(|&j| self.time(j) >= from)
            .fold(T::zero(), |acc, j| acc + self.weight(j) * block_norm(self.block(j)))
    }

    pub fn max_block_norm(&self) -> T {
        (0..self.len()).fold(T::zero(), |acc, j| acc.max(block_norm(self.block(j))))
    }
}

pub(crate) fn block_norm<T: Real>(b: &[Cplx<T>]) -> T {
    b.iter().fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im).sqrt()
}

/// Weights `(w0, w1)` with `int_0^L e^{-s tau} (f0 (1 - tau/L) + f1 tau/L) dtau
/// = w0 f0 + w1 f1`.
pub(crate) fn linear_weights<T: Real>(s: Cplx<T>, len: T) -> (Cplx<T>, Cplx<T>) {
    let u = s * Complex::new(len, T::zero());
    let l = Complex::new(len, T::zero());
    let one = Complex::new(T::one(), T::zero());
    if crate::scalar::cabs(u).as_f64() < 1e-2 {
        let c = |x: f64| Complex::new(T::lit(x), T::zero());
        let u2 = u * u;
        let u3 = u2 * u;
        let u4 = u3 * u;
        let w1 = c(0.5) - u * c(1.0 / 3.0) + u2 * c(1.0 / 8.0) - u3 * c(1.0 / 30.0) + u4 * c(1.0 / 144.0);
        let w0 = c(0.5) - u * c(1.0 / 6.0) + u2 * c(1.0 / 24.0) - u3 * c(1.0 / 120.0) + u4 * c(1.0 / 720.0);
        (w0 * l, w1 * l)
    } else {
        let e = cexp(-u);
        let w1 = (one - e * (one + u)) / (u * u);
        let w = (one - e) / u;
        ((w - w1) * l, w1 * l)
    }
}
