//! Solves the Bezout equation `G(s) X(s) = I_m` over the analytic Wiener
//! algebra of the right half plane.
//!
//! `G = D + int_0^inf e^{-st} g(t) dt` is `m x p` with `m <= p`. The solver
//! certifies that the Wiener-Hopf operator `T_G` is right invertible, builds
//! `y = T_G* (T_G T_G*)^{-1} g`, `Y = I - y^`, the particular solution
//! `Xi = Y D+` and the inner function `Theta = Y E`, so that every solution is
//! `X = Xi + Theta Z`. The [`diagnostics`] module checks the identities these
//! satisfy on the frequency axis and on the discretized operators.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`, the precision used by the command-line tool and the tests.

pub mod bundle;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod halfline;
pub mod json;
pub mod kernels;
pub mod matrix;
pub mod oracle;
pub mod problem;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::{CMat, Cplx, Real};

pub type Complex64 = Cplx<f64>;
pub type Matrix = CMat<f64>;
pub type Grid = grid::TimeGrid<f64>;
pub type FreqGrid = grid::FrequencyGrid<f64>;
pub type Kernel = kernels::CausalKernel<f64>;
pub type Symbol = kernels::WienerPlusFunction<f64>;
pub type Operator = halfline::DiscretizedOperator<f64>;
pub type Solution = solver::BezoutSolution<f64>;
pub type Parameter = solver::SolutionParameter<f64>;
