//! The worked family `G(s) = [1, c / (s + b)]` with closed-form `y`, `Y`,
//! `Xi`, `Theta`; `a = sqrt(b^2 + c^2)`.

use crate::error::{Error, Result};
use crate::kernels::{CausalKernel, ExpSum, WienerPlusFunction};
use crate::matrix::from_real_rows;
use crate::scalar::{CMat, Cplx, Real};
use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkedInstance {
    pub b: f64,
    pub c: f64,
    pub a: f64,
}

/// Outcome of the independent dense solve used to confirm the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bootstrap {
    /// Largest deviation of `f = (T_G T_G*)^{-1} g_2` from `c e^{-at}`.
    pub f_error: f64,
    /// Largest deviation of the second component of `y` column 2 from
    /// `c^2 e^{-at} / (a + b)`.
    pub y_error: f64,
}

fn c64(re: f64, im: f64) -> Cplx<f64> {
    Complex::new(re, im)
}

impl WorkedInstance {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("b must be positive, got {b}")));
        }
        if !(c.is_finite() && c != 0.0) {
            return Err(Error::InvalidParameter(format!("c must be nonzero, got {c}")));
        }
        Ok(Self { b, c, a: b.hypot(c) })
    }

    pub fn g<T: Real>(&self) -> WienerPlusFunction<T> {
        let k = ExpSum::single(from_real_rows(&[&[0.0, self.c]]), Complex::new(T::lit(self.b), T::zero()))
            .expect("valid rate");
        WienerPlusFunction::new(from_real_rows(&[&[1.0, 0.0]]), CausalKernel::from_expsum(k)).expect("valid G")
    }

    /// Closed-form `y` as an exponential sum.
    pub fn y_kernel<T: Real>(&self) -> CausalKernel<T> {
        let (a, b, c) = (self.a, self.b, self.c);
        let coeff = from_real_rows(&[&[0.0, c], &[0.0, c * c / (a + b)]]);
        CausalKernel::from_expsum(ExpSum::single(coeff, Complex::new(T::lit(a), T::zero())).expect("valid rate"))
    }

    pub fn y_at(&self, t: f64) -> CMat<f64> {
        let e = (-self.a * t).exp();
        from_real_rows(&[&[0.0, self.c * e], &[0.0, self.c * self.c * e / (self.a + self.b)]])
    }

    pub fn g_at(&self, s: Cplx<f64>) -> CMat<f64> {
        CMat::from_row_slice(1, 2, &[c64(1.0, 0.0), self.c / (s + self.b)])
    }

    pub fn big_y(&self, s: Cplx<f64>) -> CMat<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        CMat::from_row_slice(
            2,
            2,
            &[c64(1.0, 0.0), -c / (s + a), c64(0.0, 0.0), c64(1.0, 0.0) - c * c / ((a + b) * (s + a))],
        )
    }

    pub fn y_inverse(&self, s: Cplx<f64>) -> CMat<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c / (s + b), c64(0.0, 0.0), (s + a) / (s + b)])
    }

    pub fn d_plus(&self) -> CMat<f64> {
        from_real_rows(&[&[1.0], &[0.0]])
    }

    pub fn e(&self) -> CMat<f64> {
        from_real_rows(&[&[0.0], &[1.0]])
    }

    pub fn xi(&self, _s: Cplx<f64>) -> CMat<f64> {
        self.d_plus()
    }

    pub fn theta(&self, s: Cplx<f64>) -> CMat<f64> {
        CMat::from_column_slice(2, 1, &[-self.c / (s + self.a), (s + self.b) / (s + self.a)])
    }

    pub fn det_y(&self, s: Cplx<f64>) -> Cplx<f64> {
        (s + self.b) / (s + self.a)
    }

    /// `Theta(i w)* Xi(i w) = -c / (a - i w)`, the transform of `-c e^{at}` on `t < 0`.
    pub fn theta_star_xi(&self, omega: f64) -> Cplx<f64> {
        -self.c / c64(self.a, -omega)
    }

    /// `int_{-inf}^0 |c e^{at}|^2 dt`.
    pub fn theta_star_xi_mass(&self) -> f64 {
        self.c * self.c / (2.0 * self.a)
    }

    /// Largest residual of the rational identities at `points` axis points
    /// in `[-50, 50]`: `GY = D`, `Y Y^{-1} = I`, `det Y = (s+b)/(s+a)`,
    /// `Theta* Theta = 1`, `Y [D+, E] = [Xi, Theta]`, `G Xi = 1`,
    /// `[G; E* Y^{-1}] [Xi, Theta] = I` and the closed form of `Theta* Xi`.
    pub fn rational_identity_residual(&self, points: usize) -> f64 {
        let d = from_real_rows::<f64>(&[&[1.0, 0.0]]);
        let i2 = CMat::<f64>::identity(2, 2);
        let mut worst = 0.0f64;
        for k in 0..points {
            let w = -50.0 + 100.0 * k as f64 / (points.max(2) - 1) as f64;
            let s = c64(0.0, w);
            let (g, y, yi, xi, th) = (self.g_at(s), self.big_y(s), self.y_inverse(s), self.xi(s), self.theta(s));
            let mut ype = CMat::zeros(2, 2);
            ype.set_column(0, &(&y * self.d_plus()).column(0));
            ype.set_column(1, &(&y * self.e()).column(0));
            let mut xt = CMat::zeros(2, 2);
            xt.set_column(0, &xi.column(0));
            xt.set_column(1, &th.column(0));
            let mut left = CMat::zeros(2, 2);
            left.set_row(0, &g.row(0));
            left.set_row(1, &(self.e().adjoint() * &yi).row(0));
            let residuals = [
                (&g * &y - &d).norm(),
                (&y * &yi - &i2).norm(),
                (y.determinant() - self.det_y(s)).norm(),
                ((th.adjoint() * &th)[(0, 0)] - 1.0).norm(),
                (&ype - &xt).norm(),
                ((&g * &xi)[(0, 0)] - 1.0).norm(),
                (left * &xt - &i2).norm(),
                ((th.adjoint() * &xi)[(0, 0)] - self.theta_star_xi(w)).norm(),
            ];
            worst = residuals.iter().fold(worst, |acc, r| acc.max(*r));
        }
        worst
    }

    /// Re-derives `f` and `y` by a dense solve with its own discretization
    /// (collocation at cell midpoints, kernel integrated exactly over each
    /// cell) and compares with the closed forms on `[0, horizon / 2]`.
    pub fn bootstrap(&self, step: f64, horizon: f64) -> Result<Bootstrap> {
        if !(step > 0.0 && horizon > step) {
            return Err(Error::InvalidGrid(format!("step {step}, horizon {horizon}")));
        }
        let n = (horizon / step).round() as usize;
        let (a, b, c) = (self.a, self.b, self.c);
        let t = |i: usize| (i as f64 + 0.5) * step;
        let off = 2.0 * (0.5 * b * step).sinh() / b;
        let diag = c * (1.0 - (-0.5 * b * step).exp()) / b;
        let k = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => c * (-b * (t(i) - t(j))).exp() * off,
            std::cmp::Ordering::Equal => diag,
            std::cmp::Ordering::Less => 0.0,
        });
        let gram = DMatrix::identity(n, n) + &k * k.transpose();
        let rhs = DVector::from_fn(n, |i, _| c * (-b * t(i)).exp());
        let chol = Cholesky::new(gram).ok_or(Error::NotPositiveDefinite)?;
        let f = chol.solve(&rhs);
        let y2 = k.transpose() * &f;
        let mut out = Bootstrap { f_error: 0.0, y_error: 0.0 };
        for i in 0..n {
            if t(i) > 0.5 * horizon {
                break;
            }
            let e = (-a * t(i)).exp();
            out.f_error = out.f_error.max((f[i] - c * e).abs());
            out.y_error = out.y_error.max((y2[i] - c * c * e / (a + b)).abs());
        }
        Ok(out)
    }
}
