use crate::error::{Error, Result};
use crate::hpcm::{HpcmSolver, Scheme};
use crate::transform::{to_system_case2_full, to_system_case2_reduced, FractionalBvp};
use crate::types::{ShootingParameter, UniformGrid};

/// For each `eps`, the sup over nodes of `|y_full - y_reduced|` between the
/// three-equation regularized system and the reduced two-equation system,
/// both solved at the same `s` on the same grid.
pub fn check_eps_reduction(
    problem: &FractionalBvp,
    s: f64,
    eps_list: &[f64],
    grid: &UniformGrid,
    scheme: Scheme,
) -> Result<Vec<(f64, f64)>> {
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidArgument(
            "eps list must be non-empty and strictly decreasing".into(),
        ));
    }
    let s = ShootingParameter::new(s)?;
    let mut solver = HpcmSolver::new(*grid, scheme)?;
    eps_list
        .iter()
        .map(|&eps| {
            let full = solver.solve(&to_system_case2_full(problem, s, eps)?)?;
            let reduced = solver.solve(&to_system_case2_reduced(problem, s, eps)?)?;
            let sup = full
                .values(0)
                .iter()
                .zip(reduced.values(0))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok((eps, sup))
        })
        .collect()
}
