//! Independent reference values for the integration tests. Nothing here
//! calls into the crate's numerics except `gamma`, which is checked on its
//! own against tabulated values.

#![allow(dead_code)]

use fracshoot::special::gamma;
use quadrature::double_exponential;

/// `∫_lo^hi u^{alpha-1} g(u) du` for `0 <= lo < hi`, computed after the
/// substitution `u = v^{1/alpha}` so the integrand is smooth.
pub fn kernel_integral(alpha: f64, lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let inv = 1.0 / alpha;
    let out =
        double_exponential::integrate(|v| g(v.powf(inv)), lo.powf(alpha), hi.powf(alpha), 1e-15);
    out.integral * inv
}

/// Unscaled weight integral over `[t_j, t_{j+1}]` for target `t_{n+1}`:
/// `∫ (t_{n+1} - tau)^{alpha-1} basis(tau) dtau`.
pub fn panel_integral(alpha: f64, h: f64, n: usize, j: usize, basis: impl Fn(f64) -> f64) -> f64 {
    let target = (n + 1) as f64 * h;
    let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
    kernel_integral(alpha, target - b, target - a, |u| basis(target - u))
}

/// Linear corrector pair from quadrature.
pub fn linear_corrector(alpha: f64, h: f64, n: usize, j: usize) -> (f64, f64) {
    let (tj, tj1) = (j as f64 * h, (j + 1) as f64 * h);
    (
        panel_integral(alpha, h, n, j, |s| (tj1 - s) / h),
        panel_integral(alpha, h, n, j, |s| (s - tj) / h),
    )
}

/// Linear predictor pair multiplying `(f_{n-1}, f_n)`.
pub fn linear_predictor(alpha: f64, h: f64, n: usize) -> (f64, f64) {
    let (tm, t0) = ((n as f64 - 1.0) * h, n as f64 * h);
    (
        panel_integral(alpha, h, n, n, |s| (t0 - s) / h),
        panel_integral(alpha, h, n, n, |s| (s - tm) / h),
    )
}

/// Quadratic corrector triple; panel 0 uses the half-node stencil.
pub fn quadratic_corrector(alpha: f64, h: f64, n: usize, j: usize) -> (f64, f64, f64) {
    let nodes = if j == 0 {
        [0.0, 0.5 * h, h]
    } else {
        [(j as f64 - 1.0) * h, j as f64 * h, (j as f64 + 1.0) * h]
    };
    let l = |i: usize| {
        move |s: f64| {
            let mut p = 1.0;
            for (m, &x) in nodes.iter().enumerate() {
                if m != i {
                    p *= (s - x) / (nodes[i] - x);
                }
            }
            p
        }
    };
    (
        panel_integral(alpha, h, n, j, l(0)),
        panel_integral(alpha, h, n, j, l(1)),
        panel_integral(alpha, h, n, j, l(2)),
    )
}

/// Quadratic predictor triple multiplying `(f_{n-2}, f_{n-1}, f_n)`.
pub fn quadratic_predictor(alpha: f64, h: f64, n: usize) -> (f64, f64, f64) {
    let nodes = [(n as f64 - 2.0) * h, (n as f64 - 1.0) * h, n as f64 * h];
    let l = |i: usize| {
        move |s: f64| {
            let mut p = 1.0;
            for (m, &x) in nodes.iter().enumerate() {
                if m != i {
                    p *= (s - x) / (nodes[i] - x);
                }
            }
            p
        }
    };
    (
        panel_integral(alpha, h, n, n, l(0)),
        panel_integral(alpha, h, n, n, l(1)),
        panel_integral(alpha, h, n, n, l(2)),
    )
}

/// Caputo derivative of order `alpha` of `t^p` (`p` not below `ceil(alpha)`
/// or `p` a non-negative integer below it, which gives zero).
pub fn caputo_power(alpha: f64, p: f64, t: f64) -> f64 {
    if p.fract() == 0.0 && p < alpha.ceil() {
        return 0.0;
    }
    gamma(p + 1.0).unwrap() / gamma(p + 1.0 - alpha).unwrap() * t.powf(p - alpha)
}

/// Caputo derivative of `sum_k coeff(k) t^k` over `k >= from`, `from >= ceil(alpha)`.
pub fn caputo_taylor(alpha: f64, t: f64, from: u32, coeff: impl Fn(u32) -> f64) -> f64 {
    let mut sum = 0.0;
    for k in from..from + 60 {
        let c = coeff(k);
        if c == 0.0 {
            continue;
        }
        // c * k! * t^{k-alpha} / Gamma(k+1-alpha), with k! absorbed into the ratio
        let kf = k as f64;
        let term =
            c * (ln_factorial(k) - ln_gamma_pos(kf + 1.0 - alpha)).exp() * t.powf(kf - alpha);
        sum += term;
        if term.abs() < 1e-19 && k > from + 4 {
            break;
        }
    }
    sum
}

fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

fn ln_gamma_pos(x: f64) -> f64 {
    gamma(x).unwrap().ln()
}

/// `1/k!` for odd `k` with alternating sign: Taylor coefficients of `sin`.
pub fn sine_coeff(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        return 0.0;
    }
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (-ln_factorial(k)).exp()
}

/// `1/k!`: Taylor coefficients of `exp`.
pub fn exp_coeff(k: u32) -> f64 {
    (-ln_factorial(k)).exp()
}

/// Direct Mittag-Leffler series, summed until terms stop mattering.
pub fn ml_series(alpha: f64, beta: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..400 {
        let arg = alpha * k as f64 + beta;
        let term = t.powi(k) / gamma(arg).unwrap();
        sum += term;
        if k > 5 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Running trapezoid integral of samples on a uniform grid.
pub fn trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for j in 1..values.len() {
        out[j] = out[j - 1] + 0.5 * h * (values[j - 1] + values[j]);
    }
    out
}

/// Observed order from two errors on grids refined by `ratio`.
pub fn rate(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}
