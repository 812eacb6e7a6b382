//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All algorithms are written against [`Real`]; `f64` is the working precision
//! used by the CLI and the test-suite, `f32` is supported for storage and quick
//! evaluation but cannot reach the tight solver tolerances.

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar: f32 or f64.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + Debug + Display + 'static
{
    /// Converts a literal. Panics only if the value is not representable at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cplx<T> = Complex<T>;
pub type CMat<T> = DMatrix<Complex<T>>;

#[inline]
pub fn cplx<T: Real>(re: f64, im: f64) -> Cplx<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn cplx_finite<T: Real>(z: Cplx<T>) -> bool {
    z.re.is_finite_value() && z.im.is_finite_value()
}

/// e^{z} without going through num-complex's `Float`-bounded inherent method.
#[inline]
pub fn cexp<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let r = z.re.exp();
    Complex::new(r * z.im.cos(), r * z.im.sin())
}

#[inline]
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub fn carg<T: Real>(z: Cplx<T>) -> T {
    z.im.atan2(z.re)
}

#[inline]
pub fn cinv<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let d = z.re * z.re + z.im * z.im;
    Complex::new(z.re / d, -z.im / d)
}

#[inline]
pub fn cscale<T: Real>(z: Cplx<T>, s: T) -> Cplx<T> {
    Complex::new(z.re * s, z.im * s)
}
