pub mod build;
pub mod lowrank;
pub mod operator;
pub mod solve;
pub mod spectrum;

pub use build::{
    build_adjoint, build_hankel, build_tg_tgstar, build_tr, build_wiener_hopf, decomposition_residual,
    DecompositionResidual,
};
pub use lowrank::{range_finder, LowRank};
pub use operator::{DiscretizedOperator, OperatorKind, DENSE_LIMIT};
pub use solve::{spd_solve, SolveMethod, SpdSolution, SpdSolveConfig};
pub use spectrum::{extreme_eigenvalues, hermitian_defect, min_eigenvalue, spectral_norm, Extremes};
