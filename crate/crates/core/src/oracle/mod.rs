//! Independent ground truth: closed forms, grid refinement and an alternative
//! solve path.

pub mod dual_grid;
pub mod random;
pub mod schur;
pub mod worked;

pub use dual_grid::{dual_grid_compare, DualGridReport};
pub use schur::{relative_sample_difference, schur_path_y, SchurPath};
pub use worked::{Bootstrap, WorkedInstance};
