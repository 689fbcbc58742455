//! PECE stepping for systems of Caputo initial value problems.
//!
//! Each equation is advanced on its Volterra form
//! `y_i(t) = y_i(0) + J^{beta_i} f_i(t, Y)`. At every node all predictors are
//! formed first, the right-hand sides are evaluated once on the predicted
//! state, then all correctors are formed and the right-hand sides are
//! re-evaluated on the corrected state and cached for later memory sums.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::system::{Equation, FivpSystem, SolutionGrid, StartingTrace};
use super::weights::WeightTable;
use crate::error::{Error, Result};
use crate::types::{FractionalOrder, UniformGrid};

/// Interpolation used for the right-hand side history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Piecewise linear interpolation, second order.
    Linear,
    /// Piecewise quadratic interpolation, third order.
    Quadratic,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Linear => "linear",
            Scheme::Quadratic => "quadratic",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Scheme::Linear),
            "quadratic" => Ok(Scheme::Quadratic),
            other => Err(Error::InvalidArgument(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Starting values for the quadratic scheme at `t_{1/2}`, `t_1` and `t_2`.
#[derive(Clone, Debug)]
pub struct StartingValues {
    pub half: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub trace: StartingTrace,
}

/// Sub-grid refinement factor for the starting procedure; always even so
/// that `t_{1/2}` is a sub-grid node.
pub fn starting_refinement(n: usize) -> usize {
    let r = ((n as f64).sqrt().ceil() as usize).max(8);
    r + r % 2
}

/// Solver bound to one grid and scheme, caching weight tables by order so
/// repeated solves (base and sensitivity systems) share them.
#[derive(Debug, Clone)]
pub struct HpcmSolver {
    grid: UniformGrid,
    scheme: Scheme,
    sub_grid: Option<UniformGrid>,
    tables: Vec<Arc<WeightTable>>,
    sub_tables: Vec<Arc<WeightTable>>,
}

impl HpcmSolver {
    pub fn new(grid: UniformGrid, scheme: Scheme) -> Result<Self> {
        let min = match scheme {
            Scheme::Linear => 1,
            Scheme::Quadratic => 4,
        };
        if grid.intervals() < min {
            return Err(Error::InvalidGrid(format!(
                "{scheme} scheme needs N >= {min}, got {}",
                grid.intervals()
            )));
        }
        let sub_grid = match scheme {
            Scheme::Linear => None,
            Scheme::Quadratic => Some(starting_grid(&grid)?),
        };
        Ok(Self {
            grid,
            scheme,
            sub_grid,
            tables: Vec::new(),
            sub_tables: Vec::new(),
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Weight table for `order` on the main grid.
    pub fn table(&mut self, order: FractionalOrder) -> Arc<WeightTable> {
        cached_table(&mut self.tables, order, self.grid)
    }

    pub fn solve(&mut self, system: &FivpSystem) -> Result<SolutionGrid> {
        let main: Vec<_> = system.orders().into_iter().map(|o| self.table(o)).collect();
        match self.scheme {
            Scheme::Linear => {
                let (values, rhs) = march_linear(system.equations(), &self.grid, &main)?;
                Ok(SolutionGrid {
                    grid: self.grid,
                    orders: system.orders(),
                    values,
                    rhs,
                    half: None,
                    start: None,
                })
            }
            Scheme::Quadratic => {
                let sub_grid = self.sub_grid.expect("quadratic solver has a sub-grid");
                let sub: Vec<_> = system
                    .orders()
                    .into_iter()
                    .map(|o| cached_table(&mut self.sub_tables, o, sub_grid))
                    .collect();
                let start = run_starting(system, sub_grid, &sub)?;
                march_quadratic(system, &self.grid, &main, start)
            }
        }
    }
}

fn cached_table(
    cache: &mut Vec<Arc<WeightTable>>,
    order: FractionalOrder,
    grid: UniformGrid,
) -> Arc<WeightTable> {
    if let Some(t) = cache.iter().find(|t| t.alpha() == order) {
        return t.clone();
    }
    let t = Arc::new(WeightTable::new(order, grid));
    cache.push(t.clone());
    t
}

/// Solve `system` on `grid` with a fresh solver.
pub fn solve_system(
    system: &FivpSystem,
    grid: &UniformGrid,
    scheme: Scheme,
) -> Result<SolutionGrid> {
    HpcmSolver::new(*grid, scheme)?.solve(system)
}

/// Starting values for the quadratic scheme: the linear scheme on `[t_0, t_2]`
/// refined by [`starting_refinement`], read off at `t_{1/2}`, `t_1`, `t_2`.
pub fn starting_values(system: &FivpSystem, grid: &UniformGrid) -> Result<StartingValues> {
    if grid.intervals() < 2 {
        return Err(Error::InvalidGrid("starting values need N >= 2".into()));
    }
    let sub_grid = starting_grid(grid)?;
    let tables: Vec<_> = system
        .orders()
        .into_iter()
        .map(|o| Arc::new(WeightTable::new(o, sub_grid)))
        .collect();
    run_starting(system, sub_grid, &tables)
}

fn starting_grid(grid: &UniformGrid) -> Result<UniformGrid> {
    let r = starting_refinement(grid.intervals());
    UniformGrid::new(grid.start(), grid.node(2), 2 * r)
}

fn run_starting(
    system: &FivpSystem,
    sub_grid: UniformGrid,
    tables: &[Arc<WeightTable>],
) -> Result<StartingValues> {
    let (values, _) = march_linear(system.equations(), &sub_grid, tables)?;
    let r = sub_grid.intervals() / 2;
    let pick = |j: usize| values.iter().map(|v| v[j]).collect::<Vec<_>>();
    Ok(StartingValues {
        half: pick(r / 2),
        first: pick(r),
        second: pick(2 * r),
        trace: StartingTrace {
            grid: sub_grid,
            values,
        },
    })
}

#[inline]
fn eval(eq: &Equation, index: usize, t: f64, state: &[f64], node: usize) -> Result<f64> {
    let v = (eq.rhs)(t, state);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            equation: index,
            node,
        })
    }
}

fn eval_all(eqs: &[Equation], t: f64, state: &[f64], node: usize, out: &mut [f64]) -> Result<()> {
    for (i, (eq, o)) in eqs.iter().zip(out.iter_mut()).enumerate() {
        *o = eval(eq, i, t, state, node)?;
    }
    Ok(())
}

type Traces = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn march_linear(
    eqs: &[Equation],
    grid: &UniformGrid,
    tables: &[Arc<WeightTable>],
) -> Result<Traces> {
    let d = eqs.len();
    let n_int = grid.intervals();
    let mut y: Vec<Vec<f64>> = vec![Vec::with_capacity(n_int + 1); d];
    let mut f: Vec<Vec<f64>> = vec![Vec::with_capacity(n_int + 1); d];

    let state0: Vec<f64> = eqs.iter().map(|e| e.ic).collect();
    let mut buf = vec![0.0; d];
    eval_all(eqs, grid.node(0), &state0, 0, &mut buf)?;
    for i in 0..d {
        y[i].push(state0[i]);
        f[i].push(buf[i]);
    }

    // First node: hold f_0 over the panel, then apply the corrector twice.
    let t1 = grid.node(1);
    let mut pred = vec![0.0; d];
    for i in 0..d {
        let tb = &tables[i];
        let [p1, p2] = *tb.lin_pred();
        pred[i] = eqs[i].ic + tb.recip_gamma() * (p1 + p2) * f[i][0];
    }
    let mut fp = vec![0.0; d];
    eval_all(eqs, t1, &pred, 1, &mut fp)?;
    let mut corr = vec![0.0; d];
    for _ in 0..2 {
        for i in 0..d {
            let tb = &tables[i];
            let [w1, w2] = *tb.lin(0);
            corr[i] = eqs[i].ic + tb.recip_gamma() * (w1 * f[i][0] + w2 * fp[i]);
        }
        eval_all(eqs, t1, &corr, 1, &mut fp)?;
    }
    for i in 0..d {
        y[i].push(corr[i]);
        f[i].push(fp[i]);
    }

    let mut mem = vec![0.0; d];
    for n in 1..n_int {
        let t = grid.node(n + 1);
        for i in 0..d {
            let tb = &tables[i];
            let fi = &f[i];
            let mut acc = 0.0;
            for j in 0..n {
                let [w1, w2] = *tb.lin(n - j);
                acc += w1 * fi[j] + w2 * fi[j + 1];
            }
            mem[i] = acc;
            let [p1, p2] = *tb.lin_pred();
            pred[i] = eqs[i].ic + tb.recip_gamma() * (acc + p1 * fi[n - 1] + p2 * fi[n]);
        }
        eval_all(eqs, t, &pred, n + 1, &mut fp)?;
        for i in 0..d {
            let tb = &tables[i];
            let [w1, w2] = *tb.lin(0);
            corr[i] = eqs[i].ic + tb.recip_gamma() * (mem[i] + w1 * f[i][n] + w2 * fp[i]);
        }
        eval_all(eqs, t, &corr, n + 1, &mut buf)?;
        for i in 0..d {
            y[i].push(corr[i]);
            f[i].push(buf[i]);
        }
    }
    Ok((y, f))
}

fn march_quadratic(
    system: &FivpSystem,
    grid: &UniformGrid,
    tables: &[Arc<WeightTable>],
    start: StartingValues,
) -> Result<SolutionGrid> {
    let eqs = system.equations();
    let d = eqs.len();
    let n_int = grid.intervals();
    let mut y: Vec<Vec<f64>> = vec![Vec::with_capacity(n_int + 1); d];
    let mut f: Vec<Vec<f64>> = vec![Vec::with_capacity(n_int + 1); d];

    let state0 = system.initial_state();
    let mut buf = vec![0.0; d];
    for (j, state) in [&state0, &start.first, &start.second]
        .into_iter()
        .enumerate()
    {
        eval_all(eqs, grid.node(j), state, j, &mut buf)?;
        for i in 0..d {
            y[i].push(state[i]);
            f[i].push(buf[i]);
        }
    }
    let mut f_half = vec![0.0; d];
    eval_all(eqs, grid.half_node(), &start.half, 0, &mut f_half)?;

    let mut mem = vec![0.0; d];
    let mut pred = vec![0.0; d];
    let mut fp = vec![0.0; d];
    let mut corr = vec![0.0; d];
    for n in 2..n_int {
        let t = grid.node(n + 1);
        for i in 0..d {
            let tb = &tables[i];
            let fi = &f[i];
            let [c0, c1, c2] = *tb.first(n);
            let mut acc = c0 * fi[0] + c1 * f_half[i] + c2 * fi[1];
            for j in 1..n {
                let [w1, w2, w3] = *tb.quad(n - j);
                acc += w1 * fi[j - 1] + w2 * fi[j] + w3 * fi[j + 1];
            }
            mem[i] = acc;
            let [p1, p2, p3] = *tb.quad_pred();
            pred[i] =
                eqs[i].ic + tb.recip_gamma() * (acc + p1 * fi[n - 2] + p2 * fi[n - 1] + p3 * fi[n]);
        }
        eval_all(eqs, t, &pred, n + 1, &mut fp)?;
        for i in 0..d {
            let tb = &tables[i];
            let [w1, w2, w3] = *tb.quad(0);
            corr[i] = eqs[i].ic
                + tb.recip_gamma() * (mem[i] + w1 * f[i][n - 1] + w2 * f[i][n] + w3 * fp[i]);
        }
        eval_all(eqs, t, &corr, n + 1, &mut buf)?;
        for i in 0..d {
            y[i].push(corr[i]);
            f[i].push(buf[i]);
        }
    }
    Ok(SolutionGrid {
        grid: *grid,
        orders: system.orders(),
        values: y,
        rhs: f,
        half: Some(start.half),
        start: Some(start.trace),
    })
}
