//! Product-integration weights for the predictor-corrector schemes.
//!
//! Every weight is an integral of `(t_{n+1} - tau)^(alpha-1)` against a
//! Lagrange basis polynomial over one panel. After the substitution
//! `t_{n+1} - tau = h (k + x)` with `k = n - j` the panel's weights are linear
//! combinations of the moments
//!
//! ```text
//! M_m(k) = int_0^1 (k + x)^(alpha-1) x^m dx,   m = 0, 1, 2,
//! ```
//!
//! scaled by `h^alpha`, so a table only needs one moment triple per distance.
//! Weights here exclude the `1 / Gamma(alpha)` factor.

use crate::error::{Error, Result};
use crate::types::{FractionalOrder, UniformGrid};

/// Distances at or beyond this use the binomial expansion of the moments;
/// the power-difference form loses about `k^2` ulps to cancellation.
const SERIES_FROM: usize = 2;

/// The three moments `M_0(k), M_1(k), M_2(k)`.
pub(crate) fn moments(alpha: f64, k: usize) -> [f64; 3] {
    if k == 0 {
        return [1.0 / alpha, 1.0 / (alpha + 1.0), 1.0 / (alpha + 2.0)];
    }
    if k < SERIES_FROM {
        return moments_closed(alpha, k as f64);
    }
    moments_series(alpha, k as f64)
}

/// `((k+1)^p - k^p) / p` without cancellation in the difference.
fn power_increment(k: f64, p: f64) -> f64 {
    k.powf(p) * (p * (1.0 / k).ln_1p()).exp_m1() / p
}

fn moments_closed(alpha: f64, k: f64) -> [f64; 3] {
    let i0 = power_increment(k, alpha);
    let i1 = power_increment(k, alpha + 1.0);
    let i2 = power_increment(k, alpha + 2.0);
    [i0, i1 - k * i0, i2 - 2.0 * k * i1 + k * k * i0]
}

fn moments_series(alpha: f64, k: f64) -> [f64; 3] {
    // (k + x)^(alpha-1) = k^(alpha-1) sum_i C(alpha-1, i) (x/k)^i
    let mut out = [0.0; 3];
    let mut coeff = 1.0;
    let mut kpow = 1.0;
    for i in 0..200 {
        let c = coeff * kpow;
        let fi = i as f64;
        let terms = [c / (fi + 1.0), c / (fi + 2.0), c / (fi + 3.0)];
        for (o, t) in out.iter_mut().zip(terms) {
            *o += t;
        }
        if terms[0].abs() <= 1e-18 * out[0].abs() {
            break;
        }
        coeff *= (alpha - 1.0 - fi) / (fi + 1.0);
        if coeff == 0.0 {
            break;
        }
        kpow /= k;
    }
    let scale = k.powf(alpha - 1.0);
    out.map(|m| m * scale)
}

/// Precomputed weights for one order on one grid.
///
/// Interior weights depend only on the distance `k = n - j` between the
/// target node `n + 1` and the panel `[t_j, t_{j+1}]`; they are stored per
/// distance and exposed by `(n, j)`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    alpha: FractionalOrder,
    grid: UniformGrid,
    recip_gamma: f64,
    linear: Vec<[f64; 2]>,
    quadratic: Vec<[f64; 3]>,
    first_panel: Vec<[f64; 3]>,
    linear_pred: [f64; 2],
    quadratic_pred: [f64; 3],
}

impl WeightTable {
    pub fn new(alpha: FractionalOrder, grid: UniformGrid) -> Self {
        let a = alpha.value();
        let scale = grid.step().powf(a);
        let n = grid.intervals();
        let mut linear = Vec::with_capacity(n);
        let mut quadratic = Vec::with_capacity(n);
        let mut first_panel = Vec::with_capacity(n);
        for k in 0..n {
            let [m0, m1, m2] = moments(a, k);
            linear.push([scale * m1, scale * (m0 - m1)]);
            quadratic.push([
                0.5 * scale * (m2 - m1),
                -scale * (m2 - 2.0 * m1),
                0.5 * scale * (m2 - 3.0 * m1 + 2.0 * m0),
            ]);
            first_panel.push([
                2.0 * scale * (m2 - 0.5 * m1),
                -4.0 * scale * (m2 - m1),
                2.0 * scale * (m2 - 1.5 * m1 + 0.5 * m0),
            ]);
        }
        let [m0, m1, m2] = moments(a, 0);
        let linear_pred = [scale * (m1 - m0), scale * (2.0 * m0 - m1)];
        let quadratic_pred = [
            0.5 * scale * (m2 - 3.0 * m1 + 2.0 * m0),
            -scale * (m2 - 4.0 * m1 + 3.0 * m0),
            0.5 * scale * (m2 - 5.0 * m1 + 6.0 * m0),
        ];
        let recip_gamma = 1.0 / statrs::function::gamma::gamma(a);
        Self {
            alpha,
            grid,
            recip_gamma,
            linear,
            quadratic,
            first_panel,
            linear_pred,
            quadratic_pred,
        }
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// `1 / Gamma(alpha)`.
    pub fn recip_gamma(&self) -> f64 {
        self.recip_gamma
    }

    /// `(B^1, B^2)` for target `n + 1` and panel `j`; requires `j <= n < N`.
    pub fn linear_corrector(&self, n: usize, j: usize) -> Result<[f64; 2]> {
        self.check_panel(n, j)?;
        Ok(self.linear[n - j])
    }

    /// `(b^1, b^2)` multiplying `(f_{n-1}, f_n)`; requires `1 <= n < N`.
    pub fn linear_predictor(&self, n: usize) -> Result<[f64; 2]> {
        if n == 0 || n >= self.grid.intervals() {
            return Err(Error::Index(format!(
                "linear predictor needs 1 <= n < N, got n = {n}"
            )));
        }
        Ok(self.linear_pred)
    }

    /// Quadratic corrector triple for target `n + 1` and panel `j`. Panel 0
    /// uses the half-node stencil `{t_0, t_1/2, t_1}`, later panels use
    /// `{t_{j-1}, t_j, t_{j+1}}`.
    pub fn quadratic_corrector(&self, n: usize, j: usize) -> Result<[f64; 3]> {
        self.check_panel(n, j)?;
        Ok(if j == 0 {
            self.first_panel[n]
        } else {
            self.quadratic[n - j]
        })
    }

    /// `(a^1, a^2, a^3)` multiplying `(f_{n-2}, f_{n-1}, f_n)`; requires `2 <= n < N`.
    pub fn quadratic_predictor(&self, n: usize) -> Result<[f64; 3]> {
        if n < 2 || n >= self.grid.intervals() {
            return Err(Error::Index(format!(
                "quadratic predictor needs 2 <= n < N, got n = {n}"
            )));
        }
        Ok(self.quadratic_pred)
    }

    fn check_panel(&self, n: usize, j: usize) -> Result<()> {
        if j > n || n >= self.grid.intervals() {
            return Err(Error::Index(format!(
                "panel weights need j <= n < N, got n = {n}, j = {j}, N = {}",
                self.grid.intervals()
            )));
        }
        Ok(())
    }

    // Unchecked accessors for the solver's inner loops.

    #[inline]
    pub(crate) fn lin(&self, k: usize) -> &[f64; 2] {
        &self.linear[k]
    }

    #[inline]
    pub(crate) fn quad(&self, k: usize) -> &[f64; 3] {
        &self.quadratic[k]
    }

    #[inline]
    pub(crate) fn first(&self, n: usize) -> &[f64; 3] {
        &self.first_panel[n]
    }

    #[inline]
    pub(crate) fn lin_pred(&self) -> &[f64; 2] {
        &self.linear_pred
    }

    #[inline]
    pub(crate) fn quad_pred(&self) -> &[f64; 3] {
        &self.quadratic_pred
    }
}

/// Linear-interpolation corrector weights `(B^{1,j}_{n+1}, B^{2,j}_{n+1})`.
pub fn linear_corrector_weights(
    n: usize,
    j: usize,
    alpha: FractionalOrder,
    grid: &UniformGrid,
) -> Result<(f64, f64)> {
    if j > n || n >= grid.intervals() {
        return Err(Error::Index(format!(
            "need j <= n < N, got n = {n}, j = {j}"
        )));
    }
    let [m0, m1, _] = moments(alpha.value(), n - j);
    let scale = grid.step().powf(alpha.value());
    Ok((scale * m1, scale * (m0 - m1)))
}

/// Linear-interpolation predictor weights `(b^1_{n+1}, b^2_{n+1})`.
pub fn linear_predictor_weights(
    n: usize,
    alpha: FractionalOrder,
    grid: &UniformGrid,
) -> Result<(f64, f64)> {
    if n == 0 || n >= grid.intervals() {
        return Err(Error::Index(format!(
            "linear predictor needs 1 <= n < N, got n = {n}"
        )));
    }
    let [m0, m1, _] = moments(alpha.value(), 0);
    let scale = grid.step().powf(alpha.value());
    Ok((scale * (m1 - m0), scale * (2.0 * m0 - m1)))
}

/// Quadratic-interpolation corrector weights; `j = 0` returns the half-node
/// triple `(A^{1,0}, A^{2,0}, A^{3,0})`.
pub fn quadratic_corrector_weights(
    n: usize,
    j: usize,
    alpha: FractionalOrder,
    grid: &UniformGrid,
) -> Result<(f64, f64, f64)> {
    if j > n || n >= grid.intervals() {
        return Err(Error::Index(format!(
            "need j <= n < N, got n = {n}, j = {j}"
        )));
    }
    let [m0, m1, m2] = moments(alpha.value(), n - j);
    let s = grid.step().powf(alpha.value());
    Ok(if j == 0 {
        (
            2.0 * s * (m2 - 0.5 * m1),
            -4.0 * s * (m2 - m1),
            2.0 * s * (m2 - 1.5 * m1 + 0.5 * m0),
        )
    } else {
        (
            0.5 * s * (m2 - m1),
            -s * (m2 - 2.0 * m1),
            0.5 * s * (m2 - 3.0 * m1 + 2.0 * m0),
        )
    })
}

/// Quadratic-interpolation predictor weights `(a^1, a^2, a^3)`.
pub fn quadratic_predictor_weights(
    n: usize,
    alpha: FractionalOrder,
    grid: &UniformGrid,
) -> Result<(f64, f64, f64)> {
    if n < 2 || n >= grid.intervals() {
        return Err(Error::Index(format!(
            "quadratic predictor needs 2 <= n < N, got n = {n}"
        )));
    }
    let [m0, m1, m2] = moments(alpha.value(), 0);
    let s = grid.step().powf(alpha.value());
    Ok((
        0.5 * s * (m2 - 3.0 * m1 + 2.0 * m0),
        -s * (m2 - 4.0 * m1 + 3.0 * m0),
        0.5 * s * (m2 - 5.0 * m1 + 6.0 * m0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(h: f64, n: usize) -> UniformGrid {
        UniformGrid::new(0.0, h * n as f64, n).unwrap()
    }

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn classical_limit_weights() {
        let g = grid(0.05, 20);
        let one = order(1.0);
        for (n, j) in [(0, 0), (5, 2), (19, 0), (19, 19)] {
            let (b1, b2) = linear_corrector_weights(n, j, one, &g).unwrap();
            assert_relative_eq!(b1, 0.025, max_relative = 1e-14);
            assert_relative_eq!(b2, 0.025, max_relative = 1e-14);
        }
        let (p1, p2) = linear_predictor_weights(3, one, &g).unwrap();
        assert_relative_eq!(p1, -0.025, max_relative = 1e-14);
        assert_relative_eq!(p2, 0.075, max_relative = 1e-14);
        let (a1, a2, a3) = quadratic_predictor_weights(3, one, &g).unwrap();
        assert_relative_eq!(a1, 5.0 * 0.05 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(a2, -16.0 * 0.05 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(a3, 23.0 * 0.05 / 12.0, max_relative = 1e-13);
    }

    #[test]
    fn predictor_signs() {
        let g = grid(0.05, 10);
        let (b1, b2) = linear_predictor_weights(2, order(0.3), &g).unwrap();
        assert!(b1 < 0.0 && 0.0 < b2);
    }

    #[test]
    fn index_errors() {
        let g = grid(0.1, 10);
        let a = order(0.5);
        assert!(linear_predictor_weights(0, a, &g).is_err());
        assert!(quadratic_predictor_weights(1, a, &g).is_err());
        assert!(linear_corrector_weights(3, 4, a, &g).is_err());
        assert!(linear_corrector_weights(10, 0, a, &g).is_err());
        let table = WeightTable::new(a, g);
        assert!(table.linear_predictor(0).is_err());
        assert!(table.quadratic_predictor(1).is_err());
        assert!(table.quadratic_corrector(2, 3).is_err());
    }

    #[test]
    fn closed_and_series_moments_agree_at_switch() {
        // the closed form loses ~k^2 ulps, so the bound scales with k^2
        for &a in &[0.1, 0.5, 0.9, 1.0 - 1e-10] {
            for k in [2usize, 3, 4, 6] {
                let c = moments_closed(a, k as f64);
                let s = moments_series(a, k as f64);
                for m in 0..3 {
                    assert_relative_eq!(c[m], s[m], max_relative = 1e-14 * (k * k) as f64);
                }
            }
        }
    }

    #[test]
    fn table_matches_free_functions() {
        let g = grid(0.1, 12);
        let a = order(0.37);
        let t = WeightTable::new(a, g);
        for n in 0..12 {
            for j in 0..=n {
                let (b1, b2) = linear_corrector_weights(n, j, a, &g).unwrap();
                assert_eq!(t.linear_corrector(n, j).unwrap(), [b1, b2]);
                let (q1, q2, q3) = quadratic_corrector_weights(n, j, a, &g).unwrap();
                assert_eq!(t.quadratic_corrector(n, j).unwrap(), [q1, q2, q3]);
            }
        }
    }
}
