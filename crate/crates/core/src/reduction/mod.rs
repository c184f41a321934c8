//! Reduction of linear functionals `I_g f = <S f, g>` to the operator `S` on
//! finite-dimensional problems, with exact radius computations and checks of
//! the domination and initial-error statements.

mod problem;
mod radius;
mod verify;

pub use problem::{build_ig, DiscreteProblem, Functional, Spectrum, TopEigenpair};
pub use radius::{fixed_info_radius, minimal_error_std, MinimalError, Target, SUBSET_LIMIT};
pub use verify::{
    verify_domination, verify_e0_characterization, DominationCounterexample, DominationReport, E0Report,
    DOMINATION_TOL,
};
