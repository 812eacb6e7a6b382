pub mod causal;
pub mod expsum;
pub mod fullline;
pub mod io;
pub mod samples;
pub mod wiener;

pub use causal::{AnticausalKernel, CausalKernel, KernelNorms};
pub use expsum::{ExpSum, ExpTerm};
pub use fullline::{convolve, convolve_causal, FullLineExact, FullLineKernel, KernelRef};
pub use samples::Samples;
pub use wiener::{SPoint, WienerPlusFunction};
