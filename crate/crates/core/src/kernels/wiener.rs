use super::causal::CausalKernel;
use super::fullline::convolve_causal;
use crate::error::{Error, Result};
use crate::grid::{Placement, TimeGrid};
use crate::matrix;
use crate::scalar::{CMat, Cplx, Real};
use num_complex::Complex;

/// Point of the closed right half plane, including the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SPoint<T> {
    Finite(Cplx<T>),
    Infinity,
}

impl<T: Real> SPoint<T> {
    pub fn axis(omega: T) -> Self {
        SPoint::Finite(Complex::new(T::zero(), omega))
    }
}

/// `F(s) = D_F + int_0^inf e^{-st} f(t) dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerPlusFunction<T: Real> {
    constant: CMat<T>,
    kernel: CausalKernel<T>,
}

impl<T: Real> WienerPlusFunction<T> {
    pub fn new(constant: CMat<T>, kernel: CausalKernel<T>) -> Result<Self> {
        if constant.shape() != (kernel.rows(), kernel.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "constant is {}x{}, kernel is {}x{}",
                constant.nrows(),
                constant.ncols(),
                kernel.rows(),
                kernel.cols()
            )));
        }
        if !matrix::is_finite(&constant) {
            return Err(Error::InvalidKernel("non-finite constant term".into()));
        }
        Ok(Self { constant, kernel })
    }

    pub fn constant_only(constant: CMat<T>) -> Self {
        let kernel = CausalKernel::zero(constant.nrows(), constant.ncols());
        Self { constant, kernel }
    }

    pub fn rows(&self) -> usize {
        self.constant.nrows()
    }

    pub fn cols(&self) -> usize {
        self.constant.ncols()
    }

    pub fn constant(&self) -> &CMat<T> {
        &self.constant
    }

    pub fn kernel(&self) -> &CausalKernel<T> {
        &self.kernel
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.constant.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn eval(&self, s: SPoint<T>) -> Result<CMat<T>> {
        match s {
            SPoint::Infinity => Ok(self.constant.clone()),
            SPoint::Finite(s) => Ok(&self.constant + self.kernel.transform(s)?),
        }
    }

    pub fn eval_axis(&self, omega: T) -> Result<CMat<T>> {
        self.eval(SPoint::axis(omega))
    }

    pub fn left_mul(&self, a: &CMat<T>) -> Result<Self> {
        Ok(Self { constant: a * &self.constant, kernel: self.kernel.left_mul(a)? })
    }

    pub fn right_mul(&self, b: &CMat<T>) -> Result<Self> {
        Ok(Self { constant: &self.constant * b, kernel: self.kernel.right_mul(b)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { constant: &self.constant + &other.constant, kernel: self.kernel.add(&other.kernel)? })
    }

    /// Product `F G`: constants multiply, kernels expand bilinearly with one
    /// convolution sampled on `(grid, placement)` unless exact.
    pub fn mul(&self, other: &Self, grid: TimeGrid<T>, placement: Placement) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "multiplying {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let constant = &self.constant * &other.constant;
        let mut kernel = self.kernel.right_mul(&other.constant)?;
        kernel = kernel.add(&other.kernel.left_mul(&self.constant)?)?;
        if !self.kernel.is_zero() && !other.kernel.is_zero() {
            let conv = convolve_causal(&self.kernel, &other.kernel, grid, placement)?;
            kernel = kernel.add(&conv)?;
        }
        Ok(Self { constant, kernel })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::expsum::ExpSum;
    use crate::matrix::from_real_rows;
    use crate::scalar::cplx;

    fn g0() -> WienerPlusFunction<f64> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, 1.0]]), cplx(1.0, 0.0)).unwrap();
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).unwrap()
    }

    #[test]
    fn constant_function_is_constant() {
        let f = WienerPlusFunction::<f64>::constant_only(from_real_rows(&[&[1.0, 0.0]]));
        let v = f.eval(SPoint::Finite(cplx(5.0, 2.0))).unwrap();
        assert_eq!(v, from_real_rows(&[&[1.0, 0.0]]));
    }

    #[test]
    fn g0_values() {
        let g = g0();
        let v = g.eval(SPoint::Finite(cplx(0.0, 0.0))).unwrap();
        assert!((v[(0, 0)].re - 1.0).abs() < 1e-15 && (v[(0, 1)].re - 1.0).abs() < 1e-15);
        assert_eq!(g.eval(SPoint::Infinity).unwrap(), from_real_rows(&[&[1.0, 0.0]]));
        assert!(matches!(g.eval(SPoint::Finite(cplx(-1.0, 0.0))), Err(Error::LeftHalfPlane(_))));
    }

    #[test]
    fn product_matches_pointwise_product() {
        let a = WienerPlusFunction::new(
            from_real_rows(&[&[1.0]]),
            CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[1.0]]), cplx(1.0, 0.0)).unwrap()),
        )
        .unwrap();
        let b = WienerPlusFunction::new(
            from_real_rows(&[&[2.0]]),
            CausalKernel::from_expsum(ExpSum::single(from_real_rows(&[&[-1.0]]), cplx(3.0, 0.0)).unwrap()),
        )
        .unwrap();
        let grid = TimeGrid::from_horizon(0.01, 20.0).unwrap();
        let p = a.mul(&b, grid, Placement::Cells).unwrap();
        assert!(p.kernel().expsum().is_some());
        for &w in &[0.0, 0.7, -4.0] {
            let lhs = p.eval_axis(w).unwrap()[(0, 0)];
            let rhs = a.eval_axis(w).unwrap()[(0, 0)] * b.eval_axis(w).unwrap()[(0, 0)];
            assert!((lhs - rhs).norm() < 1e-13);
        }
        let sampled = a
            .mul(&WienerPlusFunction::new(b.constant().clone(), b.kernel().to_sampled(grid, Placement::Cells)).unwrap(), grid, Placement::Cells)
            .unwrap();
        let lhs = sampled.eval_axis(0.7).unwrap()[(0, 0)];
        let rhs = a.eval_axis(0.7).unwrap()[(0, 0)] * b.eval_axis(0.7).unwrap()[(0, 0)];
        assert!((lhs - rhs).norm() < 1e-4);
    }
}
