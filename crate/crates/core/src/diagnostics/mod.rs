//! Numerical checks of the identities satisfied by a solution, collected in
//! a [`ResidualReport`].

pub mod appendix;
pub mod causality;
pub mod freqint;
pub mod identities;
pub mod report;
pub mod verify;
pub mod winding;

pub use appendix::{decomposition_check, hankel_rank_check, kappa_bounds, schur_route_check, tr_tail_mass, TailMass};
pub use causality::{
    anticausal_mass, anticausality, kernel_identity, pythagoras, pythagoras_random, pythagoras_terms, AnticausalMass,
    PythagorasTerms,
};
pub use identities::{eval_on_grid, residual_bezout, residual_gy, residual_inner, residual_tolokonnikov, winding_check};
pub use report::{CheckId, GridMetadata, ReportEntry, ResidualReport};
pub use verify::{default_tolerance, grid_metadata, run_check, verify, write_traces, VerifyConfig};
pub use winding::{winding_det_y, winding_number, WindingResult};
