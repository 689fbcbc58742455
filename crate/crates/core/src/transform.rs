//! Reduction of a two-point fractional boundary value problem to systems of
//! Caputo initial value problems of order at most one.
//!
//! Component layout is fixed throughout the crate: component 0 is `y`,
//! component 1 is whatever feeds the second argument of `f` (the lower
//! derivative), and the last component is `z ~ y'`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hpcm::{Equation, FivpSystem, SolutionGrid, StateFn};
use crate::types::{FractionalOrder, RobinBc, ShootingParameter};

/// Default regularization used when the lower derivative is `y'`.
pub const DEFAULT_EPS: f64 = 1e-10;

/// Scalar function of `(t, y, w)`.
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Right-hand side `f(t, y, w)` together with the partials the shooting
/// methods need. Newton needs `f_y`, `f_w`; Halley additionally needs the
/// three second partials.
#[derive(Clone)]
pub struct Nonlinearity {
    pub f: Fn3,
    pub f_y: Option<Fn3>,
    pub f_w: Option<Fn3>,
    pub f_yy: Option<Fn3>,
    pub f_ww: Option<Fn3>,
    pub f_wy: Option<Fn3>,
}

impl Nonlinearity {
    pub fn new(f: Fn3) -> Self {
        Self {
            f,
            f_y: None,
            f_w: None,
            f_yy: None,
            f_ww: None,
            f_wy: None,
        }
    }

    pub fn with_first(mut self, f_y: Fn3, f_w: Fn3) -> Self {
        self.f_y = Some(f_y);
        self.f_w = Some(f_w);
        self
    }

    pub fn with_second(mut self, f_yy: Fn3, f_ww: Fn3, f_wy: Fn3) -> Self {
        self.f_yy = Some(f_yy);
        self.f_ww = Some(f_ww);
        self.f_wy = Some(f_wy);
        self
    }

    /// `f = phi(t) + c(t) y + b(t) w`, with all partials filled in.
    pub fn linear(
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        c: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let c = Arc::new(c);
        let b = Arc::new(b);
        let (c1, b1) = (c.clone(), b.clone());
        let zero: Fn3 = Arc::new(|_, _, _| 0.0);
        Self::new(Arc::new(move |t, y, w| phi(t) + c1(t) * y + b1(t) * w))
            .with_first(Arc::new(move |t, _, _| c(t)), Arc::new(move |t, _, _| b(t)))
            .with_second(zero.clone(), zero.clone(), zero)
    }

    fn first(&self) -> Result<(Fn3, Fn3)> {
        Ok((
            self.f_y.clone().ok_or(Error::MissingPartial("f_y"))?,
            self.f_w.clone().ok_or(Error::MissingPartial("f_w"))?,
        ))
    }

    fn second(&self) -> Result<(Fn3, Fn3, Fn3)> {
        Ok((
            self.f_yy.clone().ok_or(Error::MissingPartial("f_yy"))?,
            self.f_ww.clone().ok_or(Error::MissingPartial("f_ww"))?,
            self.f_wy.clone().ok_or(Error::MissingPartial("f_wy"))?,
        ))
    }
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("f_y", &self.f_y.is_some())
            .field("f_w", &self.f_w.is_some())
            .field("f_yy", &self.f_yy.is_some())
            .field("f_ww", &self.f_ww.is_some())
            .field("f_wy", &self.f_wy.is_some())
            .finish()
    }
}

/// `D^{alpha2} y = f(t, y, D^{alpha1} y)` on `[0, b]` with Robin conditions.
#[derive(Clone, Debug)]
pub struct FractionalBvp {
    alpha1: FractionalOrder,
    alpha2: FractionalOrder,
    rhs: Nonlinearity,
    bc: RobinBc,
    end: f64,
}

impl FractionalBvp {
    pub fn new(alpha1: f64, alpha2: f64, rhs: Nonlinearity, bc: RobinBc, end: f64) -> Result<Self> {
        let alpha1 = FractionalOrder::unit_interval(alpha1)?;
        let alpha2 = FractionalOrder::superunit(alpha2)?;
        if !(end.is_finite() && end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "right endpoint must be positive, got {end}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            rhs,
            bc,
            end,
        })
    }

    pub fn alpha1(&self) -> FractionalOrder {
        self.alpha1
    }

    pub fn alpha2(&self) -> FractionalOrder {
        self.alpha2
    }

    pub fn rhs(&self) -> &Nonlinearity {
        &self.rhs
    }

    pub fn bc(&self) -> &RobinBc {
        &self.bc
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// True when the lower derivative is the classical `y'`.
    pub fn integer_lower_order(&self) -> bool {
        self.alpha1.value() == 1.0
    }

    fn left_value(&self, s: f64) -> Result<f64> {
        let bc = &self.bc;
        if bc.a1 == 0.0 {
            return Err(Error::InvalidBoundary(
                "a1 = 0 leaves y(0) undetermined; use the linear-explicit solver, which shoots on y(0)"
                    .into(),
            ));
        }
        Ok((bc.gamma1 - bc.b1 * s) / bc.a1)
    }

    fn lower_partial_ic(&self) -> Result<f64> {
        let bc = &self.bc;
        if bc.a1 == 0.0 {
            return Err(Error::InvalidBoundary(
                "a1 = 0 is not supported by this parameterization".into(),
            ));
        }
        Ok(-bc.b1 / bc.a1)
    }
}

fn order(v: f64) -> Result<FractionalOrder> {
    FractionalOrder::unit_interval(v)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    Ok(())
}

/// Cascade `D^{beta_i} x_i = x_{i+1}` closed by `D^{beta_last} x_last = g(t, x)`.
fn cascade(orders: &[f64], ics: &[f64], last: StateFn) -> Result<FivpSystem> {
    let d = orders.len();
    let mut eqs = Vec::with_capacity(d);
    for i in 0..d - 1 {
        let rhs: StateFn = Arc::new(move |_, x: &[f64]| x[i + 1]);
        eqs.push(Equation::new(order(orders[i])?, ics[i], rhs));
    }
    eqs.push(Equation::new(order(orders[d - 1])?, ics[d - 1], last));
    FivpSystem::new(eqs)
}

fn base_rhs(problem: &FractionalBvp) -> StateFn {
    let f = problem.rhs.f.clone();
    Arc::new(move |t, x: &[f64]| f(t, x[0], x[1]))
}

/// Three-equation system for `0 < alpha1 < 1`: orders
/// `(alpha1, 1 - alpha1, alpha2 - 1)` in `(y, w, z)` with `z(0) = s`.
pub fn to_system_case1(problem: &FractionalBvp, s: ShootingParameter) -> Result<FivpSystem> {
    let a1 = problem.alpha1.value();
    if a1 >= 1.0 {
        return Err(Error::InvalidOrder {
            value: a1,
            reason: "the three-equation reduction needs alpha1 < 1",
        });
    }
    let s = s.value();
    cascade(
        &[a1, 1.0 - a1, problem.alpha2.value() - 1.0],
        &[problem.left_value(s)?, 0.0, s],
        base_rhs(problem),
    )
}

fn require_integer_lower(problem: &FractionalBvp) -> Result<()> {
    if !problem.integer_lower_order() {
        return Err(Error::InvalidOrder {
            value: problem.alpha1.value(),
            reason: "the regularized reduction needs alpha1 = 1",
        });
    }
    Ok(())
}

/// Two-equation system for `alpha1 = 1`: `D^{1-eps} y = z`,
/// `D^{alpha2-1} z = f(t, y, z)`.
pub fn to_system_case2_reduced(
    problem: &FractionalBvp,
    s: ShootingParameter,
    eps: f64,
) -> Result<FivpSystem> {
    require_integer_lower(problem)?;
    check_eps(eps)?;
    let s = s.value();
    cascade(
        &[1.0 - eps, problem.alpha2.value() - 1.0],
        &[problem.left_value(s)?, s],
        base_rhs(problem),
    )
}

/// Three-equation system for `alpha1 = 1` with orders `(1-eps, eps, alpha2-1)`.
pub fn to_system_case2_full(
    problem: &FractionalBvp,
    s: ShootingParameter,
    eps: f64,
) -> Result<FivpSystem> {
    require_integer_lower(problem)?;
    check_eps(eps)?;
    let s = s.value();
    cascade(
        &[1.0 - eps, eps, problem.alpha2.value() - 1.0],
        &[problem.left_value(s)?, 0.0, s],
        base_rhs(problem),
    )
}

/// The system the shooting loop integrates: case 1 when `alpha1 < 1`,
/// otherwise the reduced regularized system.
pub fn base_system(problem: &FractionalBvp, s: ShootingParameter, eps: f64) -> Result<FivpSystem> {
    if problem.integer_lower_order() {
        to_system_case2_reduced(problem, s, eps)
    } else {
        to_system_case1(problem, s)
    }
}

/// Reads component `i` of a frozen trajectory at `t`. Times the trajectory
/// does not cover produce NaN, which the solver reports as non-finite.
fn sampler(sol: &Arc<SolutionGrid>, i: usize) -> impl Fn(f64) -> f64 + Send + Sync {
    let sol = sol.clone();
    move |t| sol.value_at(i, t).unwrap_or(f64::NAN)
}

/// First-order sensitivity system in `(y_s, w_s, z_s)` (or `(y_s, z_s)` for
/// the reduced system), with partials frozen along `base`.
pub fn newton_sensitivity_system(
    problem: &FractionalBvp,
    base: Arc<SolutionGrid>,
    _s: ShootingParameter,
) -> Result<FivpSystem> {
    let (f_y, f_w) = problem.rhs.first()?;
    let d = base.dimension();
    let orders: Vec<f64> = base.orders().iter().map(|o| o.value()).collect();
    let mut ics = vec![0.0; d];
    ics[0] = problem.lower_partial_ic()?;
    ics[d - 1] = 1.0;
    let (y, w) = (sampler(&base, 0), sampler(&base, 1));
    let last: StateFn = Arc::new(move |t, x: &[f64]| {
        let (yb, wb) = (y(t), w(t));
        f_y(t, yb, wb) * x[0] + f_w(t, yb, wb) * x[1]
    });
    cascade(&orders, &ics, last)
}

/// Second-order sensitivity system with zero initial data. The forcing is
/// the full second derivative of `f(t, y(s), w(s))` in `s`, including the
/// factor 2 on the mixed term.
pub fn halley_sensitivity_system(
    problem: &FractionalBvp,
    base: Arc<SolutionGrid>,
    first_sens: Arc<SolutionGrid>,
    _s: ShootingParameter,
) -> Result<FivpSystem> {
    let (f_y, f_w) = problem.rhs.first()?;
    let (f_yy, f_ww, f_wy) = problem.rhs.second()?;
    if first_sens.dimension() != base.dimension() {
        return Err(Error::InvalidArgument(
            "sensitivity and base dimensions differ".into(),
        ));
    }
    let d = base.dimension();
    let orders: Vec<f64> = base.orders().iter().map(|o| o.value()).collect();
    let (y, w) = (sampler(&base, 0), sampler(&base, 1));
    let (ys, ws) = (sampler(&first_sens, 0), sampler(&first_sens, 1));
    let last: StateFn = Arc::new(move |t, x: &[f64]| {
        let (yb, wb, p, q) = (y(t), w(t), ys(t), ws(t));
        f_y(t, yb, wb) * x[0]
            + f_w(t, yb, wb) * x[1]
            + f_yy(t, yb, wb) * p * p
            + 2.0 * f_wy(t, yb, wb) * p * q
            + f_ww(t, yb, wb) * q * q
    });
    cascade(&orders, &vec![0.0; d], last)
}
