//! High-order predictor-corrector methods for systems of Caputo initial
//! value problems on a uniform grid.

mod solver;
mod system;
mod weights;

pub use solver::{
    solve_system, starting_refinement, starting_values, HpcmSolver, Scheme, StartingValues,
};
pub use system::{Equation, FivpSystem, SolutionGrid, StartingTrace, StateFn};
pub use weights::{
    linear_corrector_weights, linear_predictor_weights, quadratic_corrector_weights,
    quadratic_predictor_weights, WeightTable,
};
