//! Newton and Halley shooting on the unknown initial slope.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hpcm::{HpcmSolver, Scheme, SolutionGrid};
use crate::transform::{
    base_system, halley_sensitivity_system, newton_sensitivity_system, FractionalBvp, DEFAULT_EPS,
};
use crate::types::{RobinBc, ShootingParameter, UniformGrid};

/// Guard on `|F_s|` (Newton) and on the Halley denominator.
pub const DENOMINATOR_GUARD: f64 = 1e-14;
/// Abort when the residual grows past this multiple of the initial one.
pub const GROWTH_GUARD: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Newton,
    Halley,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Newton => "newton",
            Method::Halley => "halley",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "newton" => Ok(Method::Newton),
            "halley" => Ok(Method::Halley),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub s0: f64,
    /// Maximum number of updates `m`; the trace holds at most `m + 1` rows.
    pub max_iter: usize,
    /// Stopping tolerance on `|F(s_k)|`.
    pub tol: f64,
    pub method: Method,
    pub scheme: Scheme,
    /// Regularization for problems whose lower derivative is `y'`.
    pub eps: f64,
}

impl ShootingConfig {
    pub fn new(s0: f64, method: Method, scheme: Scheme) -> Self {
        Self {
            s0,
            max_iter: 10,
            tol: 1e-10,
            method,
            scheme,
            eps: DEFAULT_EPS,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        ShootingParameter::new(self.s0)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub k: usize,
    pub s: f64,
    /// `|F(s_k)|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Converged,
    MaxIterReached,
    Diverged(String),
}

impl Termination {
    pub fn is_converged(&self) -> bool {
        matches!(self, Termination::Converged)
    }
}

#[derive(Debug, Clone)]
pub struct ShootingTrace {
    pub iterates: Vec<Iterate>,
    pub termination: Termination,
    /// Index into `iterates` of the returned solution (the smallest residual).
    pub final_index: usize,
    pub final_solution: SolutionGrid,
}

impl ShootingTrace {
    pub fn final_iterate(&self) -> &Iterate {
        &self.iterates[self.final_index]
    }

    /// Residual at row `k`; rows past the end hold the last value.
    pub fn residual_held(&self, k: usize) -> f64 {
        self.iterates[k.min(self.iterates.len() - 1)].residual
    }

    /// Number of updates performed.
    pub fn updates(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Signed residual `a2 y_N + b2 z_N - gamma2` of a base solution.
pub fn residual(sol: &SolutionGrid, bc: &RobinBc) -> f64 {
    let d = sol.dimension();
    bc.a2 * sol.last(0) + bc.b2 * sol.last(d - 1) - bc.gamma2
}

/// `a2 u_N + b2 v_N` for a sensitivity solution.
fn derivative(sol: &SolutionGrid, bc: &RobinBc) -> f64 {
    let d = sol.dimension();
    bc.a2 * sol.last(0) + bc.b2 * sol.last(d - 1)
}

pub fn newton_step(s: f64, f: f64, fs: f64) -> Result<f64> {
    if fs.abs() < DENOMINATOR_GUARD {
        return Err(Error::DerivativeUnderflow(fs));
    }
    Ok(s - f / fs)
}

pub fn halley_step(s: f64, f: f64, fs: f64, fss: f64) -> Result<f64> {
    let den = 2.0 * fs * fs - f * fss;
    if den.abs() < DENOMINATOR_GUARD {
        return Err(Error::DerivativeUnderflow(den));
    }
    Ok(s - 2.0 * f * fs / den)
}

fn next_parameter(
    problem: &FractionalBvp,
    solver: &mut HpcmSolver,
    method: Method,
    base: &Arc<SolutionGrid>,
    s: f64,
    f: f64,
) -> Result<f64> {
    let bc = problem.bc();
    let sp = ShootingParameter::new(s)?;
    let first = Arc::new(solver.solve(&newton_sensitivity_system(problem, base.clone(), sp)?)?);
    let fs = derivative(&first, bc);
    let next = match method {
        Method::Newton => newton_step(s, f, fs)?,
        Method::Halley => {
            let second = solver.solve(&halley_sensitivity_system(
                problem,
                base.clone(),
                first,
                sp,
            )?)?;
            halley_step(s, f, fs, derivative(&second, bc))?
        }
    };
    Ok(next)
}

/// Shoot on `s = y'(0)` until `|F(s)| <= tol` or `max_iter` updates.
///
/// Errors are returned only when nothing can be solved at `s0`; later
/// failures end the trace as `Diverged` with the best iterate retained.
pub fn shoot(
    problem: &FractionalBvp,
    grid: &UniformGrid,
    config: &ShootingConfig,
) -> Result<ShootingTrace> {
    config.validate()?;
    if (grid.end() - problem.end()).abs() > 1e-12 * problem.end().max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "grid ends at {} but the problem is posed on [0, {}]",
            grid.end(),
            problem.end()
        )));
    }
    let rhs = problem.rhs();
    if rhs.f_y.is_none() || rhs.f_w.is_none() {
        return Err(Error::MissingPartial(if rhs.f_y.is_none() {
            "f_y"
        } else {
            "f_w"
        }));
    }
    if config.method == Method::Halley {
        for (p, name) in [
            (&rhs.f_yy, "f_yy"),
            (&rhs.f_ww, "f_ww"),
            (&rhs.f_wy, "f_wy"),
        ] {
            if p.is_none() {
                return Err(Error::MissingPartial(name));
            }
        }
    }

    let bc = problem.bc();
    // both closures drive the same solver so weight tables are built once
    let solver = RefCell::new(HpcmSolver::new(*grid, config.scheme)?);
    iterate(
        config,
        bc,
        |s| {
            let sys = base_system(problem, ShootingParameter::new(s)?, config.eps)?;
            Ok(Arc::new(solver.borrow_mut().solve(&sys)?))
        },
        |base, s, f| next_parameter(problem, &mut solver.borrow_mut(), config.method, base, s, f),
    )
}

/// The shooting loop shared by every discretization: `solve` integrates the
/// base system for a given `s`, `update` proposes the next `s`.
pub(crate) fn iterate(
    config: &ShootingConfig,
    bc: &RobinBc,
    mut solve: impl FnMut(f64) -> Result<Arc<SolutionGrid>>,
    mut update: impl FnMut(&Arc<SolutionGrid>, f64, f64) -> Result<f64>,
) -> Result<ShootingTrace> {
    let mut s = config.s0;
    let mut base = solve(s)?;
    let mut iterates: Vec<Iterate> = Vec::new();
    let mut best = (0usize, base.clone());
    let mut initial = f64::NAN;
    let termination = loop {
        let k = iterates.len();
        let f = residual(&base, bc);
        let abs = f.abs();
        iterates.push(Iterate {
            k,
            s,
            residual: abs,
        });
        if k == 0 {
            initial = abs;
        } else if abs < iterates[best.0].residual || !iterates[best.0].residual.is_finite() {
            best = (k, base.clone());
        }
        if !abs.is_finite() {
            break Termination::Diverged("non-finite residual".into());
        }
        if abs <= config.tol {
            break Termination::Converged;
        }
        if abs > GROWTH_GUARD * initial {
            break Termination::Diverged(format!("residual grew from {initial:e} to {abs:e}"));
        }
        if k == config.max_iter {
            break Termination::MaxIterReached;
        }
        let step = update(&base, s, f)
            .and_then(|next| {
                if next.is_finite() {
                    Ok(next)
                } else {
                    Err(Error::InvalidArgument(format!(
                        "update produced non-finite s = {next}"
                    )))
                }
            })
            .and_then(|next| solve(next).map(|sol| (next, sol)));
        match step {
            Ok((next, sol)) => {
                s = next;
                base = sol;
            }
            Err(e) => break Termination::Diverged(e.to_string()),
        }
    };
    drop(base);
    let (final_index, sol) = best;
    Ok(ShootingTrace {
        iterates,
        termination,
        final_index,
        final_solution: Arc::unwrap_or_clone(sol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_steps() {
        // F(s) = s^3 - 8 at s = 3
        assert!((newton_step(3.0, 19.0, 27.0).unwrap() - 2.2962962962962963).abs() < 1e-15);
        assert!((halley_step(3.0, 19.0, 27.0, 18.0).unwrap() - 2.0806451612903226).abs() < 1e-15);
        assert_eq!(newton_step(1.5, 0.0, 2.0).unwrap(), 1.5);
        assert_eq!(halley_step(1.5, 0.0, 2.0, 7.0).unwrap(), 1.5);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            newton_step(1.0, 1.0, 1e-15),
            Err(Error::DerivativeUnderflow(_))
        ));
        // 2 F_s^2 - F F_ss = 2 - 2 = 0
        assert!(matches!(
            halley_step(1.0, 1.0, 1.0, 2.0),
            Err(Error::DerivativeUnderflow(_))
        ));
    }

    #[test]
    fn config_validation() {
        let c = ShootingConfig::new(0.2, Method::Newton, Scheme::Linear);
        assert!(c.validate().is_ok());
        assert!(c.with_tol(0.0).validate().is_err());
        assert!(c.with_max_iter(0).validate().is_err());
        assert!(ShootingConfig { s0: f64::NAN, ..c }.validate().is_err());
        assert_eq!("Halley".parse::<Method>().unwrap(), Method::Halley);
        assert!("secant".parse::<Method>().is_err());
    }
}
