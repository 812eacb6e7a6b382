pub mod certify;
pub mod parametrize;
pub mod pipeline;
pub mod pointers;

pub use certify::{certify_right_invertible, CertifyConfig, Certification, SchurFactors};
pub use parametrize::{parametrize, recover_parameter, RecoveredParameter, SolutionParameter};
pub use pipeline::{assemble, certify, compute_y, solve, BezoutSolution, SolverConfig, SolverDiagnostics, YComputation};
pub use pointers::{right_pointers, Pointers};
