//! Registry of benchmark problems with known exact solutions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linear_explicit::{Fn1, LinearFbvp};
use crate::special::{caputo_sine, gamma, mittag_leffler};
use crate::transform::{Fn3, FractionalBvp, Nonlinearity};
use crate::types::RobinBc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    /// Polynomial solution `t^4`, nonlinear in `y`.
    Ex1,
    /// Exponential solution, Mittag-Leffler forcing.
    Ex2,
    /// Sine solution, forcing built from Caputo derivatives of `sin t`.
    Ex3,
    /// Linear problem in `y'` with a weakly singular solution.
    Ex4,
    /// Linear problem in `y'` with a smooth solution.
    Ex5,
}

impl ExampleId {
    pub const ALL: [ExampleId; 5] = [Self::Ex1, Self::Ex2, Self::Ex3, Self::Ex4, Self::Ex5];

    /// `(alpha1, alpha2)` used when the caller does not choose.
    pub fn default_orders(self) -> (f64, f64) {
        match self {
            Self::Ex1 | Self::Ex2 | Self::Ex3 => (0.4, 1.7),
            Self::Ex4 | Self::Ex5 => (1.0, 1.5),
        }
    }

    /// Whether the lower derivative is fixed to `y'`.
    pub fn is_linear(self) -> bool {
        matches!(self, Self::Ex4 | Self::Ex5)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Self::Ex1 => 1,
            Self::Ex2 => 2,
            Self::Ex3 => 3,
            Self::Ex4 => 4,
            Self::Ex5 => 5,
        };
        write!(f, "ex{n}")
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ex1" | "1" => Ok(Self::Ex1),
            "ex2" | "2" => Ok(Self::Ex2),
            "ex3" | "3" => Ok(Self::Ex3),
            "ex4" | "4" => Ok(Self::Ex4),
            "ex5" | "5" => Ok(Self::Ex5),
            _ => Err(Error::UnknownExample(s.to_string())),
        }
    }
}

/// A benchmark problem together with its exact solution.
#[derive(Clone)]
pub struct ExampleProblem {
    pub id: ExampleId,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lambda: f64,
    pub bvp: FractionalBvp,
    /// The same problem in the form the explicit linear scheme expects
    /// (examples 4 and 5 only).
    pub linear: Option<LinearFbvp>,
    pub exact: Fn1,
    pub exact_derivative: Fn1,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl fmt::Debug for ExampleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleProblem")
            .field("id", &self.id)
            .field("alpha1", &self.alpha1)
            .field("alpha2", &self.alpha2)
            .field("gamma1", &self.gamma1)
            .field("gamma2", &self.gamma2)
            .finish_non_exhaustive()
    }
}

impl ExampleProblem {
    /// Max nodal error `max_{1<=j<=N} |y_j - y(t_j)|`.
    pub fn max_error(&self, sol: &crate::hpcm::SolutionGrid) -> f64 {
        let grid = sol.grid();
        sol.values(0)
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, y)| (y - (self.exact)(grid.node(j))).abs())
            .fold(0.0, f64::max)
    }
}

fn f3(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Fn3 {
    Arc::new(f)
}

fn zero3() -> Fn3 {
    f3(|_, _, _| 0.0)
}

fn g(x: f64) -> f64 {
    gamma(x).expect("gamma arguments of the registry are never poles")
}

fn ml(alpha: f64, beta: f64, t: f64) -> f64 {
    mittag_leffler(alpha, beta, t).unwrap_or(f64::NAN)
}

fn dsin(alpha: f64, lambda: f64, t: f64) -> f64 {
    caputo_sine(alpha, lambda, t).unwrap_or(f64::NAN)
}

/// Sign of the `y'(0)` coefficient in the left condition of examples 4 and 5.
///
/// The condition `y(0) - 1/(1 - alpha2) y'(0) = gamma1` is ambiguous about
/// whether the minus belongs to the coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum LeftBcSign {
    /// `b1 = 1/(1 - alpha2) < 0`. The reference error levels use this one.
    #[default]
    Negative,
    /// `b1 = 1/(alpha2 - 1) > 0`.
    Positive,
}

impl LeftBcSign {
    fn b1(self, alpha2: f64) -> f64 {
        match self {
            Self::Negative => 1.0 / (1.0 - alpha2),
            Self::Positive => 1.0 / (alpha2 - 1.0),
        }
    }
}

/// Robin data for the two linear examples: `y(0) + b1 y'(0) = gamma1`,
/// `y(1) + y'(1) = gamma2`, with both values taken from the exact solution.
fn linear_bc(alpha2: f64, sign: LeftBcSign, exact: &Fn1, deriv: &Fn1) -> Result<RobinBc> {
    let b1 = sign.b1(alpha2);
    let gamma1 = exact(0.0) + b1 * deriv(0.0);
    let gamma2 = exact(1.0) + deriv(1.0);
    RobinBc::new(1.0, b1, gamma1, 1.0, 1.0, gamma2)
}

/// Build example `id` at orders `(alpha1, alpha2)`. Examples 4 and 5 require
/// `alpha1 = 1`.
pub fn build_example(id: ExampleId, alpha1: f64, alpha2: f64) -> Result<ExampleProblem> {
    build_example_with_sign(id, alpha1, alpha2, LeftBcSign::default())
}

/// As [`build_example`] with an explicit left-condition sign (ignored for
/// examples 1-3).
pub fn build_example_with_sign(
    id: ExampleId,
    alpha1: f64,
    alpha2: f64,
    sign: LeftBcSign,
) -> Result<ExampleProblem> {
    if id.is_linear() && alpha1 != 1.0 {
        return Err(Error::InvalidOrder {
            value: alpha1,
            reason: "examples 4 and 5 have alpha1 = 1",
        });
    }
    if !id.is_linear() && !(alpha1 > 0.0 && alpha1 < 1.0) {
        return Err(Error::InvalidOrder {
            value: alpha1,
            reason: "examples 1-3 need 0 < alpha1 < 1",
        });
    }
    crate::types::FractionalOrder::superunit(alpha2)?;
    let (a1, a2) = (alpha1, alpha2);
    let lambda = 1.0;
    match id {
        ExampleId::Ex1 => {
            let (c2, c1) = (g(5.0) / g(5.0 - a2), g(5.0) / g(5.0 - a1));
            let f = f3(move |t, y, w| {
                c2 * t.powf(4.0 - a2) - c1 * t.powf(4.0 - a1) - t.powi(8) + y * y + w
            });
            let rhs = Nonlinearity::new(f)
                .with_first(f3(|_, y, _| 2.0 * y), f3(|_, _, _| 1.0))
                .with_second(f3(|_, _, _| 2.0), zero3(), zero3());
            let exact: Fn1 = Arc::new(|t: f64| t.powi(4));
            let deriv: Fn1 = Arc::new(|t: f64| 4.0 * t.powi(3));
            finish(
                id,
                a1,
                a2,
                lambda,
                rhs,
                RobinBc::new(1.0, 1.0, 0.0, 1.0, 1.0, 5.0)?,
                exact,
                deriv,
                None,
            )
        }
        ExampleId::Ex2 => {
            let l = lambda;
            let exact: Fn1 = Arc::new(move |t: f64| {
                // e^{lt} minus its cubic Taylor polynomial, summed directly to
                // avoid cancellation near t = 0
                let x = l * t;
                let mut term = x.powi(4) / 24.0;
                let mut sum = 0.0f64;
                let mut k = 4.0;
                while term.abs() > 1e-17 * sum.abs() || sum == 0.0 {
                    sum += term;
                    k += 1.0;
                    term *= x / k;
                    if term == 0.0 {
                        break;
                    }
                }
                sum
            });
            let deriv: Fn1 = Arc::new(move |t: f64| {
                let x = l * t;
                l * (x.exp_m1() - x - x * x / 2.0)
            });
            let ex = exact.clone();
            let (p2, p3) = (g(3.0) / (2.0 * g(3.0 - a2)), g(4.0) / (6.0 * g(4.0 - a2)));
            let (q1, q2, q3) = (
                g(2.0) / g(2.0 - a1),
                g(3.0) / (2.0 * g(3.0 - a1)),
                g(4.0) / (6.0 * g(4.0 - a1)),
            );
            let f = f3(move |t, y, w| {
                let d2 = l * l * t.powf(2.0 - a2) * ml(1.0, 3.0 - a2, l * t)
                    - (l * l * p2 * t.powf(2.0 - a2) + l.powi(3) * p3 * t.powf(3.0 - a2));
                let a = ex(t);
                let b = l * t.powf(1.0 - a1) * ml(1.0, 2.0 - a1, l * t)
                    - (l * q1 * t.powf(1.0 - a1)
                        + l * l * q2 * t.powf(2.0 - a1)
                        + l.powi(3) * q3 * t.powf(3.0 - a1));
                d2 - a * a + y * y - t * b + t * w
            });
            let rhs = Nonlinearity::new(f)
                .with_first(f3(|_, y, _| 2.0 * y), f3(|t, _, _| t))
                .with_second(f3(|_, _, _| 2.0), zero3(), zero3());
            let gamma2 = exact(1.0) + deriv(1.0);
            finish(
                id,
                a1,
                a2,
                lambda,
                rhs,
                RobinBc::new(1.0, 1.0, 0.0, 1.0, 1.0, gamma2)?,
                exact,
                deriv,
                None,
            )
        }
        ExampleId::Ex3 => {
            let l = lambda;
            let exact: Fn1 = Arc::new(move |t: f64| (l * t).sin() - t + t.powi(3) / 6.0);
            let deriv: Fn1 = Arc::new(move |t: f64| l * (l * t).cos() - 1.0 + t * t / 2.0);
            let ex = exact.clone();
            let p3 = g(4.0) / (6.0 * g(4.0 - a2));
            let (q1, q3) = (g(2.0) / g(2.0 - a1), g(4.0) / (6.0 * g(4.0 - a1)));
            let f = f3(move |t, y, w| {
                let e = ex(t);
                dsin(a2, l, t) + p3 * t.powf(3.0 - a2) + e * e - y * y - dsin(a1, l, t)
                    + q1 * t.powf(1.0 - a1)
                    - q3 * t.powf(3.0 - a1)
                    + w
            });
            let rhs = Nonlinearity::new(f)
                .with_first(f3(|_, y, _| -2.0 * y), f3(|_, _, _| 1.0))
                .with_second(f3(|_, _, _| -2.0), zero3(), zero3());
            let gamma2 = exact(1.0) + deriv(1.0);
            finish(
                id,
                a1,
                a2,
                lambda,
                rhs,
                RobinBc::new(1.0, 1.0, 0.0, 1.0, 1.0, gamma2)?,
                exact,
                deriv,
                None,
            )
        }
        ExampleId::Ex4 => {
            let exact: Fn1 = Arc::new(move |t: f64| {
                t.powf(a2) + t.powf(2.0 * a2 - 1.0) + 1.0 + 3.0 * t + 4.0 * t.powi(3) + t.powi(4)
            });
            let deriv: Fn1 = Arc::new(move |t: f64| {
                a2 * t.powf(a2 - 1.0)
                    + (2.0 * a2 - 1.0) * t.powf(2.0 * a2 - 2.0)
                    + 3.0
                    + 12.0 * t * t
                    + 4.0 * t.powi(3)
            });
            let dy = deriv.clone();
            let (k0, k1, k3, k4) = (
                g(a2 + 1.0),
                g(2.0 * a2) / g(a2),
                4.0 * g(4.0) / g(4.0 - a2),
                g(5.0) / g(5.0 - a2),
            );
            let phi = move |t: f64| {
                k0 + k1 * t.powf(a2 - 1.0)
                    + k3 * t.powf(3.0 - a2)
                    + k4 * t.powf(4.0 - a2)
                    + (2.0 * t + 6.0) * dy(t)
            };
            let c = |_: f64| 0.0;
            let b = |t: f64| -(2.0 * t + 6.0);
            linear_example(id, a2, sign, lambda, phi, c, b, exact, deriv)
        }
        ExampleId::Ex5 => {
            let l = lambda;
            let exact: Fn1 = Arc::new(move |t: f64| (l * t).sin() - t + t.powi(3) / 6.0);
            let deriv: Fn1 = Arc::new(move |t: f64| l * (l * t).cos() - 1.0 + t * t / 2.0);
            let (ex, dy) = (exact.clone(), deriv.clone());
            let p3 = 1.0 / g(4.0 - a2);
            // F = D^{alpha2} y + cos(t) y + sin(t) y' evaluated on the exact solution
            let phi = move |t: f64| {
                dsin(a2, l, t) + p3 * t.powf(3.0 - a2) + t.cos() * ex(t) + t.sin() * dy(t)
            };
            let c = |t: f64| -t.cos();
            let b = |t: f64| -t.sin();
            linear_example(id, a2, sign, lambda, phi, c, b, exact, deriv)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    id: ExampleId,
    alpha1: f64,
    alpha2: f64,
    lambda: f64,
    rhs: Nonlinearity,
    bc: RobinBc,
    exact: Fn1,
    exact_derivative: Fn1,
    linear: Option<LinearFbvp>,
) -> Result<ExampleProblem> {
    Ok(ExampleProblem {
        id,
        alpha1,
        alpha2,
        lambda,
        bvp: FractionalBvp::new(alpha1, alpha2, rhs, bc, 1.0)?,
        linear,
        exact,
        exact_derivative,
        gamma1: bc.gamma1,
        gamma2: bc.gamma2,
    })
}

#[allow(clippy::too_many_arguments)]
fn linear_example(
    id: ExampleId,
    alpha2: f64,
    sign: LeftBcSign,
    lambda: f64,
    phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    c: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
    b: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
    exact: Fn1,
    deriv: Fn1,
) -> Result<ExampleProblem> {
    let bc = linear_bc(alpha2, sign, &exact, &deriv)?;
    let phi: Fn1 = Arc::new(phi);
    let p = phi.clone();
    let linear = LinearFbvp::new(alpha2, phi, Arc::new(c), Arc::new(b), bc, 1.0)?;
    let rhs = Nonlinearity::linear(move |t| p(t), c, b);
    finish(id, 1.0, alpha2, lambda, rhs, bc, exact, deriv, Some(linear))
}
