//! Explicit per-node scheme for linear problems
//! `D^{alpha2} y = f(t) + c(t) y + b(t) y'`.
//!
//! The problem is written as `D^{1-eps} y = z`, `D^{alpha2-1} z = f + c y + b z`
//! with `y(0) = s` and `z(0) = (gamma1 - a1 s) / b1`. Both Volterra sums use
//! linear interpolation; because the right-hand side is linear, the implicit
//! corrector equation for `z_{n+1}` is solved in closed form.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hpcm::{SolutionGrid, WeightTable};
use crate::shooting::{halley_step, iterate, newton_step, Method, ShootingConfig, ShootingTrace};
use crate::transform::DEFAULT_EPS;
use crate::types::{FractionalOrder, RobinBc, ShootingParameter, UniformGrid};

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Smallest admissible magnitude of the `z_{n+1}` divisor.
pub const BRACKET_GUARD: f64 = 1e-14;

#[derive(Clone)]
pub struct LinearFbvp {
    alpha2: FractionalOrder,
    pub f: Fn1,
    pub c: Fn1,
    pub b: Fn1,
    bc: RobinBc,
    eps: f64,
    end: f64,
}

impl fmt::Debug for LinearFbvp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearFbvp")
            .field("alpha2", &self.alpha2)
            .field("bc", &self.bc)
            .field("eps", &self.eps)
            .field("end", &self.end)
            .finish_non_exhaustive()
    }
}

impl LinearFbvp {
    pub fn new(alpha2: f64, f: Fn1, c: Fn1, b: Fn1, bc: RobinBc, end: f64) -> Result<Self> {
        let alpha2 = FractionalOrder::superunit(alpha2)?;
        if bc.b1 == 0.0 {
            return Err(Error::InvalidBoundary(
                "the explicit scheme shoots on y(0) and needs b1 != 0".into(),
            ));
        }
        if !(end.is_finite() && end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "right endpoint must be positive, got {end}"
            )));
        }
        Ok(Self {
            alpha2,
            f,
            c,
            b,
            bc,
            eps: DEFAULT_EPS,
            end,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn alpha2(&self) -> FractionalOrder {
        self.alpha2
    }

    pub fn bc(&self) -> &RobinBc {
        &self.bc
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn end(&self) -> f64 {
        self.end
    }
}

/// Weight tables for the two equations on one grid.
struct Tables {
    y: WeightTable,
    z: WeightTable,
}

impl Tables {
    fn new(problem: &LinearFbvp, grid: UniformGrid) -> Result<Self> {
        Ok(Self {
            y: WeightTable::new(FractionalOrder::unit_interval(1.0 - problem.eps)?, grid),
            z: WeightTable::new(
                FractionalOrder::unit_interval(problem.alpha2.value() - 1.0)?,
                grid,
            ),
        })
    }
}

fn march(
    problem: &LinearFbvp,
    tables: &Tables,
    y0: f64,
    z0: f64,
    forced: bool,
) -> Result<SolutionGrid> {
    let grid = *tables.y.grid();
    let n_int = grid.intervals();
    let (ga, gb) = (tables.y.recip_gamma(), tables.z.recip_gamma());
    let [_, a2] = *tables.y.lin(0);
    let [_, b2] = *tables.z.lin(0);
    let (a2, b2) = (ga * a2, gb * b2);

    let forcing = |t: f64| if forced { (problem.f)(t) } else { 0.0 };
    let mut y = Vec::with_capacity(n_int + 1);
    let mut z = Vec::with_capacity(n_int + 1);
    // h_j = f(t_j) + c(t_j) y_j + b(t_j) z_j, the right-hand side of the z equation
    let mut h = Vec::with_capacity(n_int + 1);
    let t0 = grid.node(0);
    y.push(y0);
    z.push(z0);
    h.push(forcing(t0) + (problem.c)(t0) * y0 + (problem.b)(t0) * z0);

    for n in 0..n_int {
        let t = grid.node(n + 1);
        let mut my = 0.0;
        let mut mz = 0.0;
        for j in 0..n {
            let [w1, w2] = *tables.y.lin(n - j);
            my += w1 * z[j] + w2 * z[j + 1];
            let [v1, v2] = *tables.z.lin(n - j);
            mz += v1 * h[j] + v2 * h[j + 1];
        }
        let [w1, _] = *tables.y.lin(0);
        let [v1, _] = *tables.z.lin(0);
        // y_{n+1} = y_known + a2 z_{n+1}
        let y_known = y0 + ga * (my + w1 * z[n]);
        let (ct, bt) = ((problem.c)(t), (problem.b)(t));
        let rhs = z0 + gb * (mz + v1 * h[n]) + b2 * (forcing(t) + ct * y_known);
        let divisor = 1.0 - b2 * (a2 * ct + bt);
        if divisor.abs() < BRACKET_GUARD || !divisor.is_finite() {
            return Err(Error::SingularBracket {
                node: n + 1,
                value: divisor,
            });
        }
        let zn = rhs / divisor;
        let yn = y_known + a2 * zn;
        if !(zn.is_finite() && yn.is_finite()) {
            return Err(Error::NonFinite {
                equation: 1,
                node: n + 1,
            });
        }
        y.push(yn);
        z.push(zn);
        h.push(forcing(t) + ct * yn + bt * zn);
    }
    Ok(SolutionGrid {
        grid,
        orders: vec![tables.y.alpha(), tables.z.alpha()],
        rhs: vec![z.clone(), h],
        values: vec![y, z],
        half: None,
        start: None,
    })
}

fn check_grid(problem: &LinearFbvp, grid: &UniformGrid) -> Result<()> {
    if grid.intervals() < 2 {
        return Err(Error::InvalidGrid(
            "the explicit scheme needs N >= 2".into(),
        ));
    }
    if (grid.end() - problem.end).abs() > 1e-12 * problem.end.max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "grid ends at {} but the problem is posed on [0, {}]",
            grid.end(),
            problem.end
        )));
    }
    Ok(())
}

/// Solve for `(y, z)` with `y(0) = s`.
pub fn solve_linear_explicit(
    problem: &LinearFbvp,
    grid: &UniformGrid,
    s: ShootingParameter,
) -> Result<SolutionGrid> {
    check_grid(problem, grid)?;
    let tables = Tables::new(problem, *grid)?;
    let bc = &problem.bc;
    let s = s.value();
    march(problem, &tables, s, (bc.gamma1 - bc.a1 * s) / bc.b1, true)
}

/// Newton shooting on `s = y(0)`. The sensitivity is the same scheme with
/// zero forcing and initial data `(1, -a1/b1)`. For a linear problem the
/// second sensitivity vanishes, so Halley reduces to Newton.
pub fn shoot_linear(
    problem: &LinearFbvp,
    grid: &UniformGrid,
    config: &ShootingConfig,
) -> Result<ShootingTrace> {
    config.validate()?;
    check_grid(problem, grid)?;
    let tables = Tables::new(problem, *grid)?;
    let bc = problem.bc;
    // independent of s, so one solve serves every iteration
    let sens = march(problem, &tables, 1.0, -bc.a1 / bc.b1, false)?;
    let fs = bc.a2 * sens.last(0) + bc.b2 * sens.last(1);
    iterate(
        config,
        &bc,
        |s| {
            Ok(Arc::new(march(
                problem,
                &tables,
                s,
                (bc.gamma1 - bc.a1 * s) / bc.b1,
                true,
            )?))
        },
        |_, s, f| match config.method {
            Method::Newton => newton_step(s, f, fs),
            Method::Halley => halley_step(s, f, fs, 0.0),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64) -> Fn1 {
        Arc::new(move |_| v)
    }

    fn problem(alpha2: f64, f: f64, c: f64, b: f64) -> LinearFbvp {
        let bc = RobinBc::new(1.0, 2.0, 3.0, 1.0, 1.0, 0.0).unwrap();
        LinearFbvp::new(alpha2, constant(f), constant(c), constant(b), bc, 1.0).unwrap()
    }

    #[test]
    fn unforced_problem_integrates_constant_slope() {
        // z stays at z(0); y = s + z(0) t^{1-eps} / Gamma(2-eps), integrated exactly
        let p = problem(1.5, 0.0, 0.0, 0.0);
        let grid = UniformGrid::new(0.0, 1.0, 16).unwrap();
        let sol = solve_linear_explicit(&p, &grid, ShootingParameter::new(0.7).unwrap()).unwrap();
        let z0 = (3.0 - 0.7) / 2.0;
        let e = p.eps();
        let g = crate::special::gamma(2.0 - e).unwrap();
        for j in 0..=16 {
            let t = grid.node(j);
            assert!((sol.values(0)[j] - (0.7 + z0 * t.powf(1.0 - e) / g)).abs() < 1e-13);
            assert!((sol.values(1)[j] - z0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_slope_keeps_y_constant() {
        // y(0) = s with a1 s = gamma1 makes z(0) = 0
        let p = problem(1.5, 0.0, 0.0, 0.0);
        let grid = UniformGrid::new(0.0, 1.0, 8).unwrap();
        let sol = solve_linear_explicit(&p, &grid, ShootingParameter::new(3.0).unwrap()).unwrap();
        assert!(sol.values(0).iter().all(|&y| y == 3.0));
        assert!(sol.values(1).iter().all(|&z| z == 0.0));
    }

    #[test]
    fn requires_b1() {
        let bc = RobinBc::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(
            LinearFbvp::new(1.5, constant(0.0), constant(0.0), constant(0.0), bc, 1.0).is_err()
        );
    }

    #[test]
    fn singular_bracket_detected() {
        // b(t) chosen so that 1 - B(A c + b) = 0 at the first step
        let p0 = problem(1.5, 0.0, 0.0, 0.0);
        let grid = UniformGrid::new(0.0, 1.0, 4).unwrap();
        let t = Tables::new(&p0, grid).unwrap();
        let b2 = t.z.recip_gamma() * t.z.lin(0)[1];
        let p = problem(1.5, 0.0, 0.0, 1.0 / b2);
        let err =
            solve_linear_explicit(&p, &grid, ShootingParameter::new(0.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::SingularBracket { node: 1, .. }));
    }
}
