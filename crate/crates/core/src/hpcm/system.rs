use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::types::{FractionalOrder, UniformGrid};

/// Right-hand side of one equation: `(t, state) -> value`, where `state`
/// holds every component of the system at time `t`.
pub type StateFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// `D^order y_i(t) = rhs(t, Y(t))`, `y_i(0) = ic`.
#[derive(Clone)]
pub struct Equation {
    pub order: FractionalOrder,
    pub rhs: StateFn,
    pub ic: f64,
}

impl Equation {
    pub fn new(order: FractionalOrder, ic: f64, rhs: StateFn) -> Self {
        Self { order, rhs, ic }
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Equation")
            .field("order", &self.order)
            .field("ic", &self.ic)
            .finish_non_exhaustive()
    }
}

/// Coupled system of Caputo initial value problems with orders in `(0, 1]`.
#[derive(Clone, Debug)]
pub struct FivpSystem {
    equations: Vec<Equation>,
}

impl FivpSystem {
    pub fn new(equations: Vec<Equation>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::InvalidArgument(
                "system needs at least one equation".into(),
            ));
        }
        for eq in &equations {
            let v = eq.order.value();
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidOrder {
                    value: v,
                    reason: "system equations need 0 < order <= 1",
                });
            }
            if !eq.ic.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "initial condition {} is not finite",
                    eq.ic
                )));
            }
        }
        Ok(Self { equations })
    }

    pub fn dimension(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn orders(&self) -> Vec<FractionalOrder> {
        self.equations.iter().map(|e| e.order).collect()
    }

    pub fn initial_state(&self) -> Vec<f64> {
        self.equations.iter().map(|e| e.ic).collect()
    }
}

/// Values of the sub-grid run that produced the quadratic scheme's
/// starting values on `[t_0, t_2]`.
#[derive(Clone, Debug)]
pub struct StartingTrace {
    pub(crate) grid: UniformGrid,
    pub(crate) values: Vec<Vec<f64>>,
}

impl StartingTrace {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Refinement factor relative to the main grid.
    pub fn refinement(&self) -> usize {
        self.grid.intervals() / 2
    }

    pub fn values(&self, component: usize) -> &[f64] {
        &self.values[component]
    }
}

/// Nodal approximations of every component of a solved system.
#[derive(Clone, Debug)]
pub struct SolutionGrid {
    pub(crate) grid: UniformGrid,
    pub(crate) orders: Vec<FractionalOrder>,
    pub(crate) values: Vec<Vec<f64>>,
    pub(crate) rhs: Vec<Vec<f64>>,
    pub(crate) half: Option<Vec<f64>>,
    pub(crate) start: Option<StartingTrace>,
}

impl SolutionGrid {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    /// Orders of the equations that produced this solution.
    pub fn orders(&self) -> &[FractionalOrder] {
        &self.orders
    }

    /// Component `i` at nodes `0..=N`.
    pub fn values(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// Cached right-hand side of equation `i` at the corrected nodes.
    pub fn rhs_cache(&self, i: usize) -> &[f64] {
        &self.rhs[i]
    }

    /// Component `i` at the last node `t_N`.
    pub fn last(&self, i: usize) -> f64 {
        *self.values[i]
            .last()
            .expect("solution grids are never empty")
    }

    /// State at the half node `t_{1/2}` (quadratic scheme only).
    pub fn half_node_values(&self) -> Option<&[f64]> {
        self.half.as_deref()
    }

    pub fn starting_trace(&self) -> Option<&StartingTrace> {
        self.start.as_ref()
    }

    /// Component `i` at time `t`, if `t` is a main-grid node or a node of the
    /// starting sub-grid.
    pub fn value_at(&self, i: usize, t: f64) -> Option<f64> {
        if let Some(j) = node_index(&self.grid, t) {
            return Some(self.values[i][j]);
        }
        let start = self.start.as_ref()?;
        node_index(&start.grid, t).map(|j| start.values[i][j])
    }
}

fn node_index(grid: &UniformGrid, t: f64) -> Option<usize> {
    let x = (t - grid.start()) / grid.step();
    let j = x.round();
    if j < 0.0 || j > grid.intervals() as f64 || (x - j).abs() > 1e-8 {
        return None;
    }
    Some(j as usize)
}
