//! Discretized operators on `L^2([0, T])^d`.
//!
//! A function is represented by its values at the cell midpoints
//! `t_j = (j + 1/2) h`, stored sample-major (`x[j * d + c]`). Every sample
//! carries the same quadrature weight `h`, so the discrete adjoint of an
//! operator is its conjugate transpose.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::matrix::fmt_e12;
use crate::scalar::{CMat, Cplx, Real};
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

/// Largest operator dimension handled by dense factorizations and
/// eigensolvers; larger operators are applied matrix-free.
pub const DENSE_LIMIT: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    WienerHopf,
    Hankel,
    Composite,
}

/// Block Toeplitz matrix: block `(i, j)` is `lag(i - j)` for
/// `lo <= i - j <= hi`, zero otherwise.
#[derive(Clone, Debug)]
pub(crate) struct BlockToeplitz<T: Real> {
    lo: isize,
    hi: isize,
    lags: Vec<Cplx<T>>,
    split: Split<T>,
}

/// Block Hankel matrix: block `(i, l)` is `anti(i + l)`.
#[derive(Clone, Debug)]
pub(crate) struct BlockHankel<T: Real> {
    anti: Vec<Cplx<T>>,
    split: Split<T>,
}

/// Entry-wise split-complex copy of a block sequence: `re[e][k]`, `im[e][k]`
/// for entry `e = r + c m` of block `k`, used by the apply loops.
#[derive(Clone, Debug)]
struct Split<T: Real> {
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
    zero: Vec<bool>,
    real: Vec<bool>,
}

impl<T: Real> Split<T> {
    fn new(blocks: &[Cplx<T>], b: usize) -> Self {
        let count = if b == 0 { 0 } else { blocks.len() / b };
        let mut re = vec![Vec::with_capacity(count); b];
        let mut im = vec![Vec::with_capacity(count); b];
        for k in 0..count {
            for e in 0..b {
                re[e].push(blocks[k * b + e].re);
                im[e].push(blocks[k * b + e].im);
            }
        }
        let zero = (0..b).map(|e| re[e].iter().chain(&im[e]).all(|v| *v == T::zero())).collect();
        let real = (0..b).map(|e| im[e].iter().all(|v| *v == T::zero())).collect();
        Self { re, im, zero, real }
    }
}

/// `sum_k (ar + i ai)[k] (br + i bi)[k]` with four running accumulators.
#[inline]
fn split_dot<T: Real>(ar: &[T], ai: &[T], br: &[T], bi: &[T], a_real: bool) -> (T, T) {
    let n = ar.len();
    let z = T::zero();
    let (mut r0, mut r1, mut r2, mut r3) = (z, z, z, z);
    let (mut i0, mut i1, mut i2, mut i3) = (z, z, z, z);
    let chunks = n / 4;
    if a_real {
        for k in 0..chunks {
            let j = 4 * k;
            r0 += ar[j] * br[j];
            r1 += ar[j + 1] * br[j + 1];
            r2 += ar[j + 2] * br[j + 2];
            r3 += ar[j + 3] * br[j + 3];
            i0 += ar[j] * bi[j];
            i1 += ar[j + 1] * bi[j + 1];
            i2 += ar[j + 2] * bi[j + 2];
            i3 += ar[j + 3] * bi[j + 3];
        }
        for j in 4 * chunks..n {
            r0 += ar[j] * br[j];
            i0 += ar[j] * bi[j];
        }
    } else {
        for k in 0..chunks {
            let j = 4 * k;
            r0 += ar[j] * br[j] - ai[j] * bi[j];
            r1 += ar[j + 1] * br[j + 1] - ai[j + 1] * bi[j + 1];
            r2 += ar[j + 2] * br[j + 2] - ai[j + 2] * bi[j + 2];
            r3 += ar[j + 3] * br[j + 3] - ai[j + 3] * bi[j + 3];
            i0 += ar[j] * bi[j] + ai[j] * br[j];
            i1 += ar[j + 1] * bi[j + 1] + ai[j + 1] * br[j + 1];
            i2 += ar[j + 2] * bi[j + 2] + ai[j + 2] * br[j + 2];
            i3 += ar[j + 3] * bi[j + 3] + ai[j + 3] * br[j + 3];
        }
        for j in 4 * chunks..n {
            r0 += ar[j] * br[j] - ai[j] * bi[j];
            i0 += ar[j] * bi[j] + ai[j] * br[j];
        }
    }
    ((r0 + r1) + (r2 + r3), (i0 + i1) + (i2 + i3))
}

/// Component-major split copy of a block vector, optionally reversed in time.
fn split_vector<T: Real>(x: &[Cplx<T>], p: usize, n: usize, reversed: bool) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let mut re = vec![vec![T::zero(); n]; p];
    let mut im = vec![vec![T::zero(); n]; p];
    for j in 0..n {
        let jj = if reversed { n - 1 - j } else { j };
        for c in 0..p {
            re[c][jj] = x[j * p + c].re;
            im[c][jj] = x[j * p + c].im;
        }
    }
    (re, im)
}

#[derive(Clone, Debug)]
enum Repr<T: Real> {
    Identity,
    Dense(Arc<CMat<T>>),
    Toeplitz(Arc<BlockToeplitz<T>>),
    Hankel(Arc<BlockHankel<T>>),
    /// `ops[0] * ops[1] * ...`
    Product(Vec<DiscretizedOperator<T>>),
    Sum(Vec<(Cplx<T>, DiscretizedOperator<T>)>),
}

#[derive(Clone, Debug)]
pub struct DiscretizedOperator<T: Real> {
    kind: OperatorKind,
    provenance: String,
    grid: TimeGrid<T>,
    out_dim: usize,
    in_dim: usize,
    repr: Repr<T>,
}

fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> DiscretizedOperator<T> {
    pub fn identity(dim: usize, grid: TimeGrid<T>) -> Self {
        Self {
            kind: OperatorKind::WienerHopf,
            provenance: format!("I_{dim}"),
            grid,
            out_dim: dim,
            in_dim: dim,
            repr: Repr::Identity,
        }
    }

    /// Block Toeplitz operator from lag blocks `lo..=hi` (column-major
    /// `out_dim x in_dim` each).
    pub fn toeplitz(
        out_dim: usize,
        in_dim: usize,
        grid: TimeGrid<T>,
        lo: isize,
        lags: Vec<Cplx<T>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let b = out_dim * in_dim;
        let count = if b == 0 { 0 } else { lags.len() / b };
        if b != 0 && !lags.len().is_multiple_of(b) {
            return Err(Error::DimensionMismatch("lag blocks do not tile".into()));
        }
        let hi = lo + count as isize - 1;
        let n = grid.count() as isize;
        if b != 0 && (lo <= -n || hi >= n) {
            return Err(Error::DimensionMismatch("lags exceed the grid".into()));
        }
        Ok(Self {
            kind: OperatorKind::WienerHopf,
            provenance: provenance.into(),
            grid,
            out_dim,
            in_dim,
            repr: Repr::Toeplitz(Arc::new(BlockToeplitz::new(lo, hi, lags, b))),
        })
    }

    /// Block Hankel operator from anti-diagonal blocks `0..=2N-2`.
    pub fn hankel(
        out_dim: usize,
        in_dim: usize,
        grid: TimeGrid<T>,
        anti: Vec<Cplx<T>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if anti.len() != (2 * grid.count() - 1) * out_dim * in_dim {
            return Err(Error::DimensionMismatch("Hankel needs 2N-1 anti-diagonal blocks".into()));
        }
        Ok(Self {
            kind: OperatorKind::Hankel,
            provenance: provenance.into(),
            grid,
            out_dim,
            in_dim,
            repr: Repr::Hankel(Arc::new(BlockHankel::new(anti, out_dim * in_dim))),
        })
    }

    pub fn dense(
        matrix: CMat<T>,
        out_dim: usize,
        in_dim: usize,
        grid: TimeGrid<T>,
        kind: OperatorKind,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let n = grid.count();
        if matrix.shape() != (out_dim * n, in_dim * n) {
            return Err(Error::DimensionMismatch(format!(
                "dense operator is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                out_dim * n,
                in_dim * n
            )));
        }
        Ok(Self { kind, provenance: provenance.into(), grid, out_dim, in_dim, repr: Repr::Dense(Arc::new(matrix)) })
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        if self.in_dim != other.out_dim {
            return Err(Error::DimensionMismatch(format!(
                "composing {} (input dim {}) with {} (output dim {})",
                self.provenance, self.in_dim, other.provenance, other.out_dim
            )));
        }
        let mut ops = Vec::new();
        for op in [self, other] {
            match &op.repr {
                Repr::Product(inner) => ops.extend(inner.iter().cloned()),
                Repr::Identity => {}
                _ => ops.push(op.clone()),
            }
        }
        if ops.is_empty() {
            return Ok(Self::identity(self.out_dim, self.grid));
        }
        Ok(Self {
            kind: OperatorKind::Composite,
            provenance: format!("{} {}", self.provenance, other.provenance),
            grid: self.grid,
            out_dim: self.out_dim,
            in_dim: other.in_dim,
            repr: if ops.len() == 1 { ops.pop().expect("one operator").repr } else { Repr::Product(ops) },
        })
    }

    /// `sum_k c_k A_k`.
    pub fn linear_combination(terms: &[(Cplx<T>, &Self)], provenance: impl Into<String>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?.1;
        for (_, op) in terms {
            first.check_grid(op)?;
            if (op.out_dim, op.in_dim) != (first.out_dim, first.in_dim) {
                return Err(Error::DimensionMismatch("summands differ in shape".into()));
            }
        }
        Ok(Self {
            kind: OperatorKind::Composite,
            provenance: provenance.into(),
            grid: first.grid,
            out_dim: first.out_dim,
            in_dim: first.in_dim,
            repr: Repr::Sum(terms.iter().map(|(c, op)| (*c, (*op).clone())).collect()),
        })
    }

    pub fn sub(&self, other: &Self, provenance: impl Into<String>) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        Self::linear_combination(&[(one, self), (-one, other)], provenance)
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(format!(
                "{} and {} live on different grids",
                self.provenance, other.provenance
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn nrows(&self) -> usize {
        self.out_dim * self.grid.count()
    }

    pub fn ncols(&self) -> usize {
        self.in_dim * self.grid.count()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    /// Whether dense factorizations are affordable.
    pub fn is_small(&self) -> bool {
        self.nrows().max(self.ncols()) <= DENSE_LIMIT
    }

    /// Block `(i, j)` of a structured operator, `None` for composites.
    pub fn block(&self, i: usize, j: usize) -> Option<CMat<T>> {
        let (m, p) = (self.out_dim, self.in_dim);
        match &self.repr {
            Repr::Toeplitz(t) => Some(t.block(m, p, i as isize - j as isize)),
            Repr::Hankel(h) => Some(CMat::from_column_slice(m, p, &h.anti[(i + j) * m * p..(i + j + 1) * m * p])),
            Repr::Dense(d) => Some(d.view((i * m, j * p), (m, p)).into_owned()),
            Repr::Identity => Some(if i == j { CMat::identity(m, p) } else { CMat::zeros(m, p) }),
            _ => None,
        }
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Identity => Repr::Identity,
            Repr::Dense(d) => Repr::Dense(Arc::new(d.adjoint())),
            Repr::Toeplitz(t) => Repr::Toeplitz(Arc::new(t.adjoint(self.out_dim, self.in_dim))),
            Repr::Hankel(h) => Repr::Hankel(Arc::new(h.adjoint(self.out_dim, self.in_dim))),
            Repr::Product(ops) => Repr::Product(ops.iter().rev().map(|o| o.adjoint()).collect()),
            Repr::Sum(terms) => Repr::Sum(terms.iter().map(|(c, o)| (c.conj(), o.adjoint())).collect()),
        };
        Self {
            kind: self.kind,
            provenance: adjoint_name(&self.provenance),
            grid: self.grid,
            out_dim: self.in_dim,
            in_dim: self.out_dim,
            repr,
        }
    }

    /// `y = A x` for a single block vector.
    pub fn apply(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(x.len(), self.ncols(), "operand length");
        let n = self.grid.count();
        match &self.repr {
            Repr::Identity => x.to_vec(),
            Repr::Dense(d) => {
                let v = CMat::from_column_slice(x.len(), 1, x);
                (d.as_ref() * v).as_slice().to_vec()
            }
            Repr::Toeplitz(t) => t.apply(self.out_dim, self.in_dim, n, x),
            Repr::Hankel(h) => h.apply(self.out_dim, self.in_dim, n, x),
            Repr::Product(ops) => {
                let mut v = x.to_vec();
                for op in ops.iter().rev() {
                    v = op.apply(&v);
                }
                v
            }
            Repr::Sum(terms) => {
                let mut out = vec![czero(); self.nrows()];
                for (c, op) in terms {
                    for (o, v) in out.iter_mut().zip(op.apply(x)) {
                        *o += *c * v;
                    }
                }
                out
            }
        }
    }

    /// `A X` column by column.
    pub fn apply_columns(&self, x: &CMat<T>) -> CMat<T> {
        assert_eq!(x.nrows(), self.ncols(), "operand rows");
        if let Repr::Dense(d) = &self.repr {
            return d.as_ref() * x;
        }
        let cols: Vec<Vec<Cplx<T>>> = (0..x.ncols()).map(|c| self.apply(x.column(c).as_slice())).collect();
        let mut out = CMat::zeros(self.nrows(), x.ncols());
        for (c, v) in cols.into_iter().enumerate() {
            out.column_mut(c).copy_from_slice(&v);
        }
        out
    }

    pub fn to_dense(&self) -> CMat<T> {
        let n = self.grid.count();
        let (m, p) = (self.out_dim, self.in_dim);
        match &self.repr {
            Repr::Identity => CMat::identity(m * n, p * n),
            Repr::Dense(d) => d.as_ref().clone(),
            Repr::Toeplitz(_) | Repr::Hankel(_) => {
                let mut out = CMat::zeros(m * n, p * n);
                for i in 0..n {
                    for j in 0..n {
                        let blk = self.block(i, j).expect("structured operator");
                        out.view_mut((i * m, j * p), (m, p)).copy_from(&blk);
                    }
                }
                out
            }
            Repr::Product(ops) => {
                let mut acc = ops.last().expect("non-empty product").to_dense();
                for op in ops.iter().rev().skip(1) {
                    acc = match &op.repr {
                        Repr::Dense(d) => d.as_ref() * acc,
                        _ => op.apply_columns(&acc),
                    };
                }
                acc
            }
            Repr::Sum(terms) => {
                let mut out = CMat::zeros(m * n, p * n);
                for (c, op) in terms {
                    out += op.to_dense() * *c;
                }
                out
            }
        }
    }

    /// Dense copy when small, otherwise unchanged.
    pub fn materialize_if_small(&self) -> Self {
        if self.is_small() && !self.is_dense() {
            Self { repr: Repr::Dense(Arc::new(self.to_dense())), ..self.clone() }
        } else {
            self.clone()
        }
    }

    /// Replaces a dense square operator by `(A + A*)/2`.
    pub fn hermitized(&self) -> Self {
        match &self.repr {
            Repr::Dense(d) if self.out_dim == self.in_dim => {
                let h = crate::matrix::hermitize(d.as_ref());
                Self { repr: Repr::Dense(Arc::new(h)), ..self.clone() }
            }
            _ => self.clone(),
        }
    }

    /// Writes the dense matrix as CSV: one row per matrix row, `[re,im]`
    /// pairs flattened as `re,im` columns.
    pub fn export_csv<W: Write>(&self, out: W) -> Result<()> {
        let d = self.to_dense();
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::with_capacity(2 * d.ncols());
        for c in 0..d.ncols() {
            header.push(format!("re_{c}"));
            header.push(format!("im_{c}"));
        }
        w.write_record(&header)?;
        for r in 0..d.nrows() {
            let mut row = Vec::with_capacity(2 * d.ncols());
            for c in 0..d.ncols() {
                row.push(fmt_e12(d[(r, c)].re.as_f64()));
                row.push(fmt_e12(d[(r, c)].im.as_f64()));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn adjoint_name(name: &str) -> String {
    if let Some(base) = name.strip_suffix('*') {
        base.to_string()
    } else if name.contains(' ') {
        format!("({name})*")
    } else {
        format!("{name}*")
    }
}

impl<T: Real> BlockToeplitz<T> {
    fn new(lo: isize, hi: isize, lags: Vec<Cplx<T>>, b: usize) -> Self {
        let split = Split::new(&lags, b);
        Self { lo, hi, lags, split }
    }

    fn block(&self, m: usize, p: usize, n: isize) -> CMat<T> {
        if n < self.lo || n > self.hi || m * p == 0 {
            return CMat::zeros(m, p);
        }
        let k = (n - self.lo) as usize;
        CMat::from_column_slice(m, p, &self.lags[k * m * p..(k + 1) * m * p])
    }

    fn adjoint(&self, m: usize, p: usize) -> Self {
        let b = m * p;
        let count = if b == 0 { 0 } else { self.lags.len() / b };
        let mut lags = Vec::with_capacity(self.lags.len());
        for k in (0..count).rev() {
            let blk = CMat::from_column_slice(m, p, &self.lags[k * b..(k + 1) * b]);
            lags.extend_from_slice(blk.adjoint().as_slice());
        }
        Self::new(-self.hi, -self.lo, lags, b)
    }

    /// `y_i = sum_n lag(n) x_{i-n}`; with `x` reversed in time each entry is
    /// a dot product of two forward slices.
    fn apply(&self, m: usize, p: usize, n: usize, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut y = vec![czero(); m * n];
        if m * p == 0 || self.hi < self.lo {
            return y;
        }
        let (xr, xi) = split_vector(x, p, n, true);
        let last = n as isize - 1;
        y.par_chunks_mut(m).enumerate().for_each(|(i, yi)| {
            let i = i as isize;
            let lag_lo = self.lo.max(i - last);
            let lag_hi = self.hi.min(i);
            if lag_lo > lag_hi {
                return;
            }
            let a = (lag_lo - self.lo) as usize..(lag_hi - self.lo + 1) as usize;
            let bx = (last - i + lag_lo) as usize..(last - i + lag_hi + 1) as usize;
            for c in 0..p {
                for r in 0..m {
                    let e = r + c * m;
                    if self.split.zero[e] {
                        continue;
                    }
                    let (sr, si) = split_dot(
                        &self.split.re[e][a.clone()],
                        &self.split.im[e][a.clone()],
                        &xr[c][bx.clone()],
                        &xi[c][bx.clone()],
                        self.split.real[e],
                    );
                    yi[r] += Complex::new(sr, si);
                }
            }
        });
        y
    }
}

impl<T: Real> BlockHankel<T> {
    fn new(anti: Vec<Cplx<T>>, b: usize) -> Self {
        let split = Split::new(&anti, b);
        Self { anti, split }
    }

    fn adjoint(&self, m: usize, p: usize) -> Self {
        let b = m * p;
        let count = if b == 0 { 0 } else { self.anti.len() / b };
        let mut anti = Vec::with_capacity(self.anti.len());
        for k in 0..count {
            let blk = CMat::from_column_slice(m, p, &self.anti[k * b..(k + 1) * b]);
            anti.extend_from_slice(blk.adjoint().as_slice());
        }
        Self::new(anti, b)
    }

    /// `y_i = sum_l anti(i + l) x_l`.
    fn apply(&self, m: usize, p: usize, n: usize, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let mut y = vec![czero(); m * n];
        if m * p == 0 {
            return y;
        }
        let (xr, xi) = split_vector(x, p, n, false);
        y.par_chunks_mut(m).enumerate().for_each(|(i, yi)| {
            for c in 0..p {
                for r in 0..m {
                    let e = r + c * m;
                    if self.split.zero[e] {
                        continue;
                    }
                    let (sr, si) = split_dot(
                        &self.split.re[e][i..i + n],
                        &self.split.im[e][i..i + n],
                        &xr[c],
                        &xi[c],
                        self.split.real[e],
                    );
                    yi[r] += Complex::new(sr, si);
                }
            }
        });
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(len: usize, seed: u64) -> Vec<Cplx<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    fn sample_ops() -> (DiscretizedOperator<f64>, DiscretizedOperator<f64>) {
        let grid = TimeGrid::new(0.1, 5).unwrap();
        let t = DiscretizedOperator::toeplitz(2, 3, grid, -2, random_vec(6 * 5, 1), "T").unwrap();
        let h = DiscretizedOperator::hankel(2, 3, grid, random_vec(6 * 9, 2), "H").unwrap();
        (t, h)
    }

    #[test]
    fn structured_apply_matches_dense() {
        let (t, h) = sample_ops();
        let x = random_vec(15, 3);
        for op in [&t, &h] {
            let dense = op.to_dense();
            let y = op.apply(&x);
            let yd = &dense * CMat::from_column_slice(15, 1, &x);
            for (a, b) in y.iter().zip(yd.iter()) {
                assert!((a - b).norm() < 1e-13);
            }
            let adj = op.adjoint();
            assert!((adj.to_dense() - dense.adjoint()).norm() < 1e-13);
            assert!((adj.adjoint().to_dense() - dense).norm() == 0.0);
        }
    }

    #[test]
    fn composites_match_dense_algebra() {
        let (t, h) = sample_ops();
        let p = t.compose(&h.adjoint()).unwrap();
        assert_eq!(p.kind(), OperatorKind::Composite);
        let pd = t.to_dense() * h.to_dense().adjoint();
        assert!((p.to_dense() - &pd).norm() < 1e-12);
        let s = DiscretizedOperator::linear_combination(&[(cplx(2.0, 0.0), &p), (cplx(0.0, -1.0), &p)], "S").unwrap();
        assert!((s.to_dense() - pd * cplx(2.0, -1.0)).norm() < 1e-12);
        assert!(t.compose(&t).is_err());
        assert_eq!(t.compose(&h.adjoint()).unwrap().provenance(), "T H*");
    }

    #[test]
    fn block_layout_is_toeplitz_and_hankel() {
        let (t, h) = sample_ops();
        assert_eq!(t.block(3, 1), t.block(4, 2));
        assert_eq!(t.block(0, 4).unwrap().norm(), 0.0);
        assert_eq!(h.block(1, 3), h.block(2, 2));
    }

    #[test]
    fn csv_export_has_pairs() {
        let grid = TimeGrid::new(0.5, 2).unwrap();
        let id = DiscretizedOperator::<f64>::identity(1, grid);
        let mut buf = Vec::new();
        id.export_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("re_0,im_0,re_1,im_1"));
    }
}
