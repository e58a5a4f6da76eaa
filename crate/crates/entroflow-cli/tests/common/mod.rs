//! Tanh-sinh quadrature for the acceptance checks: the substitution
//! `x = m + h·tanh((π/2)·sinh t)` maps integrable endpoint singularities
//! to doubly exponential decay, so a plain trapezoid rule in `t`
//! converges to near machine precision.

use std::f64::consts::FRAC_PI_2;

/// Integrates `f` over `(a, b)` with `n + 1` tanh-sinh nodes.
///
/// Offsets from the endpoints are computed as `2/(e^{2|g|} + 1)` rather
/// than through `tanh` directly, so abscissas stay exact next to a
/// singular endpoint; integrands behaving like `x^p` or `(b - x)^p`
/// with `p > -1`, with or without a log factor, need no special casing.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let t_max = 4.3_f64;
    let h = 2.0 * t_max / n as f64;
    let mut sum = 0.0;
    for k in 0..=n {
        let t = -t_max + h * k as f64;
        let g = FRAC_PI_2 * t.sinh();
        let delta = half * 2.0 / ((2.0 * g.abs()).exp() + 1.0);
        let x = if t < 0.0 {
            a + delta
        } else if t > 0.0 {
            b - delta
        } else {
            mid
        };
        if x <= a || x >= b {
            continue;
        }
        sum += FRAC_PI_2 * t.cosh() / g.cosh().powi(2) * f(x);
    }
    sum * half * h
}

/// 1D rule with the default node budget (861 evaluations).
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate(f, a, b, 860)
}

/// `∫∫ f(x, y) dx dy` over the wedge `0 < x < y < y_hi`.
pub fn integrate_wedge<F: Fn(f64, f64) -> f64>(f: F, y_hi: f64) -> f64 {
    integrate(|y| integrate(|x| f(x, y), 0.0, y, 480), 0.0, y_hi, 480)
}

/// Grows `hi` until `density` drops below 1e-300; the mass beyond that
/// point is invisible at the tolerances used in these tests.
pub fn tail_cutoff<F: Fn(f64) -> f64>(density: F, start: f64) -> f64 {
    let mut hi = start.max(1.0);
    while density(hi) > 1e-300 {
        hi *= 1.5;
    }
    hi
}

/// `x·ln x` extended by continuity with 0 at `x = 0`.
pub fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}
