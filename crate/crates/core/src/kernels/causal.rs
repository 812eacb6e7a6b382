use super::expsum::ExpSum;
use super::samples::Samples;
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::matrix::{self, zeros};
use crate::scalar::{cplx_finite, CMat, Cplx, Real};
use num_complex::Complex;

/// Matrix kernel supported on `[0, inf)`, held as samples, as an exact
/// exponential sum, or both (in which case the samples are the exact values).
#[derive(Clone, Debug, PartialEq)]
pub struct CausalKernel<T: Real> {
    rows: usize,
    cols: usize,
    samples: Option<Samples<T>>,
    expsum: Option<ExpSum<T>>,
}

/// Norms of a kernel: `l1 = int ||k||_F`, `l2 = (int ||k||_F^2)^{1/2}` and
/// `kappa = (sum_ij ||k_ij||_1^2)^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelNorms<T> {
    pub l1: T,
    pub l2: T,
    pub kappa: T,
}

impl<T: Real> CausalKernel<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, samples: None, expsum: Some(ExpSum::zero(rows, cols)) }
    }

    pub fn from_expsum(e: ExpSum<T>) -> Self {
        Self { rows: e.rows(), cols: e.cols(), samples: None, expsum: Some(e) }
    }

    pub fn from_samples(s: Samples<T>) -> Self {
        Self { rows: s.rows(), cols: s.cols(), samples: Some(s), expsum: None }
    }

    /// Both representations; the samples must agree with the sum.
    pub fn from_parts(samples: Samples<T>, expsum: ExpSum<T>) -> Result<Self> {
        if (samples.rows(), samples.cols()) != (expsum.rows(), expsum.cols()) {
            return Err(Error::DimensionMismatch("samples and exponential sum differ in shape".into()));
        }
        let k = Self { rows: samples.rows(), cols: samples.cols(), samples: Some(samples), expsum: Some(expsum) };
        k.validate()?;
        Ok(k)
    }

    /// Attaches exact samples of the exponential sum on the given lattice.
    pub fn with_samples(&self, grid: TimeGrid<T>, placement: Placement) -> Self {
        let samples = self.sample(grid, placement);
        Self { samples: Some(samples), ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_none() && self.expsum.is_none() {
            return Err(Error::InvalidKernel("empty kernel".into()));
        }
        if let (Some(s), Some(e)) = (&self.samples, &self.expsum) {
            for j in 0..s.len() {
                let exact = e.eval(s.time(j));
                let diff = matrix::frobenius(&(s.value(j) - &exact));
                let scale = matrix::frobenius(&exact).max(T::lit(1e-300));
                if diff > T::lit(1e-12) * scale && diff > T::lit(1e-14) {
                    return Err(Error::InvalidKernel(format!(
                        "sample {j} disagrees with exponential sum by {diff}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn samples(&self) -> Option<&Samples<T>> {
        self.samples.as_ref()
    }

    pub fn expsum(&self) -> Option<&ExpSum<T>> {
        self.expsum.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        match (&self.expsum, &self.samples) {
            (Some(e), _) => e.is_zero(),
            (None, Some(s)) => s.max_block_norm() == T::zero(),
            (None, None) => true,
        }
    }

    /// Value at `t >= 0` (exact if an exponential sum is present, otherwise
    /// interpolated; zero beyond the sampled horizon).
    pub fn eval(&self, t: T) -> CMat<T> {
        if t < T::zero() {
            return zeros(self.rows, self.cols);
        }
        match (&self.expsum, &self.samples) {
            (Some(e), _) => e.eval(t),
            (None, Some(s)) => s.interpolate(t),
            (None, None) => zeros(self.rows, self.cols),
        }
    }

    /// Values on a lattice, exact when possible.
    pub fn sample(&self, grid: TimeGrid<T>, placement: Placement) -> Samples<T> {
        match (&self.expsum, &self.samples) {
            (_, Some(s)) if s.grid() == &grid && s.placement() == placement => s.clone(),
            (Some(e), _) => Samples::from_fn(grid, placement, self.rows, self.cols, |t| e.eval(t)),
            (None, Some(s)) => s.resample(grid, placement),
            (None, None) => Samples::zero(grid, placement, self.rows, self.cols),
        }
    }

    /// Values at node lags `0, h, ..., (count-1) h`, flat column-major blocks.
    pub fn node_values(&self, step: T, count: usize) -> Vec<Cplx<T>> {
        let b = self.rows * self.cols;
        let mut out = vec![Complex::new(T::zero(), T::zero()); count * b];
        match (&self.expsum, &self.samples) {
            (Some(e), _) => {
                for j in 0..count {
                    e.eval_into(step * T::from_usize_lossy(j), &mut out[j * b..(j + 1) * b]);
                }
            }
            (None, Some(s)) => {
                let same = s.placement() == Placement::Nodes
                    && (s.grid().step() - step).abs() <= step * T::lit(1e-12);
                for j in 0..count {
                    let v = if same {
                        if j < s.len() {
                            CMat::from_column_slice(self.rows, self.cols, s.block(j))
                        } else {
                            zeros(self.rows, self.cols)
                        }
                    } else {
                        s.interpolate(step * T::from_usize_lossy(j))
                    };
                    out[j * b..(j + 1) * b].copy_from_slice(v.as_slice());
                }
            }
            (None, None) => {}
        }
        out
    }

    /// Laplace transform `int_0^inf e^{-st} k(t) dt`, `Re s >= 0`.
    pub fn transform(&self, s: Cplx<T>) -> Result<CMat<T>> {
        if !cplx_finite(s) {
            return Err(Error::NonFinitePoint);
        }
        if s.re < T::zero() {
            return Err(Error::LeftHalfPlane(s.re.as_f64()));
        }
        match (&self.expsum, &self.samples) {
            (Some(e), _) => Ok(e.transform(s)),
            (None, Some(smp)) => Ok(smp.transform(s)),
            (None, None) => Err(Error::InvalidKernel("empty kernel".into())),
        }
    }

    pub fn norms(&self) -> KernelNorms<T> {
        let smp = self.norm_samples();
        let kappa = smp
            .entry_l1()
            .iter()
            .fold(T::zero(), |acc, v| acc + *v * *v)
            .sqrt();
        KernelNorms { l1: smp.l1(), l2: smp.l2(), kappa }
    }

    /// Estimated `int_T^inf ||k||_F dt` beyond the sampled horizon.
    pub fn tail_mass(&self) -> T {
        match (&self.expsum, &self.samples) {
            (Some(e), Some(s)) => e.tail_bound(s.end()),
            (Some(_), None) => T::zero(),
            (None, Some(s)) => s.tail_estimate(),
            (None, None) => T::zero(),
        }
    }

    fn norm_samples(&self) -> Samples<T> {
        if let Some(s) = &self.samples {
            return s.clone();
        }
        let e = self.expsum.as_ref().expect("validated kernel");
        if e.terms().is_empty() {
            let grid = TimeGrid::new(T::one(), 2).expect("valid grid");
            return Samples::zero(grid, Placement::Nodes, self.rows, self.cols);
        }
        let fastest = e.max_rate_modulus().unwrap_or_else(T::one).max(T::one());
        let slowest = e.min_decay().unwrap_or_else(T::one);
        let step = T::lit(0.002) / fastest;
        let horizon = T::lit(36.0) / slowest;
        let grid = TimeGrid::from_horizon(step, horizon).expect("positive step and horizon");
        self.sample(grid, Placement::Nodes)
    }

    pub fn left_mul(&self, a: &CMat<T>) -> Result<Self> {
        if a.ncols() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "left factor has {} columns, kernel has {} rows",
                a.ncols(),
                self.rows
            )));
        }
        Ok(Self {
            rows: a.nrows(),
            cols: self.cols,
            samples: self.samples.as_ref().map(|s| s.map_blocks(a.nrows(), self.cols, |v| a * v)),
            expsum: self.expsum.as_ref().map(|e| e.left_mul(a)),
        })
    }

    pub fn right_mul(&self, b: &CMat<T>) -> Result<Self> {
        if b.nrows() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "right factor has {} rows, kernel has {} columns",
                b.nrows(),
                self.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: b.ncols(),
            samples: self.samples.as_ref().map(|s| s.map_blocks(self.rows, b.ncols(), |v| v * b)),
            expsum: self.expsum.as_ref().map(|e| e.right_mul(b)),
        })
    }

    pub fn scaled(&self, c: Cplx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            samples: self.samples.as_ref().map(|s| s.map_blocks(self.rows, self.cols, |v| matrix::scale(v, c))),
            expsum: self.expsum.as_ref().map(|e| e.scaled(c)),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(Complex::new(-T::one(), T::zero()))
    }

    /// Sum of two kernels. Exact when both carry exponential sums; sampled
    /// parts are combined on the lattice of the first sampled operand.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "adding {}x{} and {}x{} kernels",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let expsum = match (&self.expsum, &other.expsum) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        let lattice = self
            .samples
            .as_ref()
            .or(other.samples.as_ref())
            .map(|s| (*s.grid(), s.placement()));
        let samples = match lattice {
            Some((grid, placement)) => {
                let a = self.sample(grid, placement);
                let b = other.sample(grid, placement);
                Some(a.zip_with(&b, |x, y| x + y)?)
            }
            None => None,
        };
        Ok(Self { rows: self.rows, cols: self.cols, samples, expsum })
    }

    /// Drops the exponential-sum form, keeping samples on the given lattice.
    pub fn to_sampled(&self, grid: TimeGrid<T>, placement: Placement) -> Self {
        Self::from_samples(self.sample(grid, placement))
    }

    /// `g*(t) = g(-t)^*`, supported on `(-inf, 0]`.
    pub fn adjoint_flip(&self) -> AnticausalKernel<T> {
        AnticausalKernel { mirror: self.conj_transpose() }
    }

    /// Pointwise conjugate transpose.
    pub fn conj_transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            samples: self
                .samples
                .as_ref()
                .map(|s| s.map_blocks(self.cols, self.rows, |v| v.adjoint())),
            expsum: self.expsum.as_ref().map(|e| e.adjoint()),
        }
    }
}

/// Kernel supported on `(-inf, 0]`, stored through its mirror image
/// `t -> k(-t)` on the half line.
#[derive(Clone, Debug, PartialEq)]
pub struct AnticausalKernel<T: Real> {
    mirror: CausalKernel<T>,
}

impl<T: Real> AnticausalKernel<T> {
    pub fn from_mirror(mirror: CausalKernel<T>) -> Self {
        Self { mirror }
    }

    pub fn mirror(&self) -> &CausalKernel<T> {
        &self.mirror
    }

    pub fn rows(&self) -> usize {
        self.mirror.rows()
    }

    pub fn cols(&self) -> usize {
        self.mirror.cols()
    }

    /// Value at `t <= 0` (zero for `t > 0`).
    pub fn eval(&self, t: T) -> CMat<T> {
        if t > T::zero() {
            return zeros(self.rows(), self.cols());
        }
        self.mirror.eval(-t)
    }

    pub fn norms(&self) -> KernelNorms<T> {
        self.mirror.norms()
    }

    /// Inverse of [`CausalKernel::adjoint_flip`].
    pub fn adjoint_flip(&self) -> CausalKernel<T> {
        self.mirror.conj_transpose()
    }

    /// `int_{-inf}^0 e^{-i w t} k(t) dt`.
    pub fn fourier(&self, omega: T) -> Result<CMat<T>> {
        self.mirror.transform(Complex::new(T::zero(), -omega))
    }
}
