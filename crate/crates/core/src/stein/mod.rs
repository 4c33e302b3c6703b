//! Stein operators, Stein equations and their solution bounds for any
//! [`SteinPair`](crate::distributions::SteinPair), with Monte Carlo
//! discrepancy statistics.

mod anchored;
mod bound;
mod discrepancy;
mod grid;
mod solver;
mod test_function;

pub use bound::{
    bound_m, check_boundary_decay, check_lemma_inequalities, check_solution_bound, check_structural_identity,
    BoundCheck, BoundReport, BoundaryDecayReport, LemmaReport, StructuralReport, LEMMA_ALPHA_WINDOW, LEMMA_SLACK,
};
pub use discrepancy::{
    characterization_against, characterization_demo, default_family, ks_distance, stein_discrepancy,
    CharacterizationReport, DiscrepancyReport, FunctionEstimate, OperatorTestFunction, DEFAULT_FAMILY_ID, SIGMA_GATE,
};
pub use grid::{refine, standard_grid, validate_grid, GridSpec, Spacing};
pub use solver::{
    apply_operator, expectation, solve_stein_equation, solve_with_constant, Form, SteinSolution, MASK_FLOOR,
    RESIDUAL_REL_STEP,
};
pub use test_function::{RealFn, TestFunction, BUILTIN_NAMES};
