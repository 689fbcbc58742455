//! Domain types shared by every solver stage.

use crate::error::{Error, Result};

/// A positive, finite fractional order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// Any finite order `value > 0`.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidOrder {
                value,
                reason: "order must be finite and positive",
            });
        }
        Ok(Self(value))
    }

    /// Order in `(0, 1]`, the range of the lower derivative and of every
    /// equation in a transformed system.
    pub fn unit_interval(value: f64) -> Result<Self> {
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::InvalidOrder {
                value,
                reason: "expected 0 < order <= 1",
            });
        }
        Ok(Self(value))
    }

    /// Order in `(1, 2)`, the range of the leading derivative.
    pub fn superunit(value: f64) -> Result<Self> {
        if !(value > 1.0 && value < 2.0) {
            return Err(Error::InvalidOrder {
                value,
                reason: "expected 1 < order < 2",
            });
        }
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Uniform partition of `[a, b]` into `n` subintervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if n == 0 {
            return Err(Error::InvalidGrid(
                "subinterval count must be positive".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            n,
            h: (b - a) / n as f64,
        })
    }

    /// Left endpoint.
    pub fn start(&self) -> f64 {
        self.a
    }

    /// Right endpoint.
    pub fn end(&self) -> f64 {
        self.b
    }

    /// Number of subintervals `N`.
    pub fn intervals(&self) -> usize {
        self.n
    }

    /// Step size `h`.
    pub fn step(&self) -> f64 {
        self.h
    }

    /// Node `t_j = a + j h`.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.h
    }

    /// The half node `t_{1/2} = a + h/2` used by the quadratic scheme.
    pub fn half_node(&self) -> f64 {
        self.a + 0.5 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |j| self.node(j))
    }
}

/// Robin boundary conditions `a1 y(a) + b1 y'(a) = gamma1`,
/// `a2 y(b) + b2 y'(b) = gamma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinBc {
    pub a1: f64,
    pub b1: f64,
    pub gamma1: f64,
    pub a2: f64,
    pub b2: f64,
    pub gamma2: f64,
}

impl RobinBc {
    pub fn new(a1: f64, b1: f64, gamma1: f64, a2: f64, b2: f64, gamma2: f64) -> Result<Self> {
        let all = [a1, b1, gamma1, a2, b2, gamma2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("coefficients must be finite".into()));
        }
        if a1 == 0.0 && b1 == 0.0 {
            return Err(Error::InvalidBoundary(
                "left condition has a1 = b1 = 0".into(),
            ));
        }
        if a2 == 0.0 && b2 == 0.0 {
            return Err(Error::InvalidBoundary(
                "right condition has a2 = b2 = 0".into(),
            ));
        }
        Ok(Self {
            a1,
            b1,
            gamma1,
            a2,
            b2,
            gamma2,
        })
    }

    /// Left operator applied to `(y(a), y'(a))`, minus `gamma1`.
    pub fn left_defect(&self, y: f64, dy: f64) -> f64 {
        self.a1 * y + self.b1 * dy - self.gamma1
    }

    /// Right operator applied to `(y(b), y'(b))`, minus `gamma2`.
    pub fn right_defect(&self, y: f64, dy: f64) -> f64 {
        self.a2 * y + self.b2 * dy - self.gamma2
    }
}

/// Unknown initial value driven by the shooting iteration.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ShootingParameter(f64);

impl ShootingParameter {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "shooting parameter {s} is not finite"
            )));
        }
        Ok(Self(s))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}
