//! Shooting solvers for two-point Caputo fractional boundary value problems
//! with Robin boundary conditions.
//!
//! A problem `D^{alpha2} y = f(t, y, D^{alpha1} y)` is reduced to a system of
//! fractional initial value problems of order at most one, integrated with a
//! predictor-corrector scheme ([`hpcm`]), and the unknown initial slope is
//! found by Newton or Halley iteration ([`shooting`]).

pub mod error;
pub mod harness;
pub mod hpcm;
pub mod linear_explicit;
pub mod shooting;
pub mod special;
pub mod transform;
pub mod types;

pub use error::{Error, Result};
pub use hpcm::{solve_system, FivpSystem, Scheme, SolutionGrid, WeightTable};
pub use linear_explicit::{shoot_linear, solve_linear_explicit, LinearFbvp};
pub use shooting::{shoot, Method, ShootingConfig, ShootingTrace, Termination};
pub use transform::{FractionalBvp, Nonlinearity};
pub use types::{FractionalOrder, RobinBc, ShootingParameter, UniformGrid};
