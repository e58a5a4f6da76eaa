//! Special functions on the positive real axis.
//!
//! `ln Γ`, `ψ`, `ψ'`, and `ψ''` share one scheme: recurrence-shift the
//! argument up to `x ≥ 10`, then evaluate a Bernoulli-number asymptotic
//! series there. The regularized lower incomplete gamma `P(a, x)` switches
//! between its power series (`x < a + 1`) and a modified Lentz continued
//! fraction for the complement.
//!
//! Accuracy on the tested ranges: `ln Γ` relative error ≤ 1e-12 on
//! `[1e-6, 1e6]`; `ψ`, `ψ'` absolute error ≤ 1e-10 and `ψ''` ≤ 1e-8 on
//! `[1e-3, 1e6]`; `P(a, x)` absolute error ≤ 1e-10.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant γ = lim (H_n − ln n).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Arguments at or above this evaluate the asymptotic series directly;
/// smaller ones are shifted up by recurrence first.
const SHIFT_THRESHOLD: f64 = 10.0;

// Stirling series for ln Γ: Σ B_{2k} / (2k (2k−1) x^{2k−1}).
const LGAMMA_TAIL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// ψ(x) ~ ln x − 1/(2x) + Σ t_k x^{−2k}; t_k = −B_{2k}/(2k).
const DIGAMMA_TAIL: [f64; 7] = [
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32_760.0,
    -1.0 / 12.0,
];

// ψ'(x) ~ 1/x + 1/(2x²) + Σ t_k x^{−(2k+1)}; t_k = B_{2k}.
const TRIGAMMA_TAIL: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

// ψ''(x) ~ −1/x² − 1/x³ + Σ t_k x^{−(2k+2)}; t_k = −(2k+1) B_{2k}.
const POLYGAMMA2_TAIL: [f64; 7] = [
    -1.0 / 2.0,
    1.0 / 6.0,
    -1.0 / 6.0,
    3.0 / 10.0,
    -5.0 / 6.0,
    691.0 / 210.0,
    -35.0 / 2.0,
];

fn check_positive(x: f64, name: &str) -> Result<f64> {
    crate::error::require_positive(x, name)
}

/// Natural log of the gamma function, `x > 0`.
///
/// `ln Γ(1) = ln Γ(2) = 0`, and `ln Γ(x+1) = ln Γ(x) + ln x`.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x, "log_gamma argument").map(log_gamma_raw)
}

pub(crate) fn log_gamma_raw(mut x: f64) -> f64 {
    // ln Γ(x) = ln Γ(x+1) − ln x
    let mut shift = 0.0;
    while x < SHIFT_THRESHOLD {
        shift -= x.ln();
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut tail = 0.0;
    let mut pw = 1.0 / x;
    for c in LGAMMA_TAIL {
        tail += c * pw;
        pw *= inv2;
    }
    shift + (x - 0.5) * x.ln() - x + 0.5 * LN_2PI + tail
}

/// Digamma function `ψ = (ln Γ)'`, `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma argument").map(digamma_raw)
}

pub(crate) fn digamma_raw(mut x: f64) -> f64 {
    // ψ(x) = ψ(x+1) − 1/x
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut tail = 0.0;
    let mut pw = inv2;
    for c in DIGAMMA_TAIL {
        tail += c * pw;
        pw *= inv2;
    }
    acc + x.ln() - 0.5 / x + tail
}

/// Trigamma function `ψ' = ψ'`, `x > 0`. Strictly positive, and
/// `ψ'(x) > 1/x` everywhere (which keeps the Fisher metrics definite).
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma argument").map(trigamma_raw)
}

pub(crate) fn trigamma_raw(mut x: f64) -> f64 {
    // ψ'(x) = ψ'(x+1) + 1/x²
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    let mut pw = inv2 * inv;
    for c in TRIGAMMA_TAIL {
        tail += c * pw;
        pw *= inv2;
    }
    acc + inv + 0.5 * inv2 + tail
}

/// Third polygamma `ψ'' = ψ''`, `x > 0`. Strictly negative.
pub fn polygamma2(x: f64) -> Result<f64> {
    check_positive(x, "polygamma2 argument").map(polygamma2_raw)
}

pub(crate) fn polygamma2_raw(mut x: f64) -> f64 {
    // ψ''(x) = ψ''(x+1) − 2/x³
    let mut acc = 0.0;
    while x < SHIFT_THRESHOLD {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    let mut pw = inv2 * inv2;
    for c in POLYGAMMA2_TAIL {
        tail += c * pw;
        pw *= inv2;
    }
    acc - inv2 - inv2 * inv + tail
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`,
/// for `a > 0`, `x ≥ 0`. Monotone from `P(a, 0) = 0` to 1.
pub fn reg_lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_positive(a, "incomplete gamma shape")?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete gamma evaluation point must be nonnegative and finite, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        lower_series(a, x)
    } else {
        upper_continued_fraction(a, x).map(|q| 1.0 - q)
    }
}

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

// Power series γ(a,x) = x^a e^{−x} Σ_{n≥0} x^n / (a (a+1) ⋯ (a+n)).
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            let log_prefix = a * x.ln() - x - log_gamma_raw(a);
            return Ok((log_prefix + sum.ln()).exp());
        }
    }
    Err(Error::Convergence(format!(
        "incomplete gamma series stalled at a = {a}, x = {x}"
    )))
}

// Modified Lentz evaluation of the continued fraction for Q(a,x).
fn upper_continued_fraction(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            let log_prefix = a * x.ln() - x - log_gamma_raw(a);
            return Ok(log_prefix.exp() * h);
        }
    }
    Err(Error::Convergence(format!(
        "incomplete gamma continued fraction stalled at a = {a}, x = {x}"
    )))
}
