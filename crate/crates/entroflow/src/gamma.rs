//! Gamma family in mean parametrization, its Shannon entropy and Fisher
//! geometry, and maximum-likelihood fitting.
//!
//! The density with mean `μ` and shape `κ` (both positive) is
//! `f(x) = exp(−xκ/μ) x^(κ−1) (κ/μ)^κ / Γ(κ)` for `x > 0`, so the rate is
//! `κ/μ`, the standard deviation `μ/√κ`, and the coefficient of variation
//! `1/√κ`. Entropy is `S = κ − ln(κ/μ) + ln Γ(κ) − (κ−1) ψ(κ)`, maximal in
//! `κ` at the exponential member `κ = 1`. The Fisher metric is
//! `diag(κ/μ², ψ'(κ) − 1/κ)`.

use crate::error::{require_positive, Error, Result};
use crate::geometry::{Metric2, MetricField, Point2};
use crate::specfun::{digamma_raw, log_gamma_raw, polygamma2_raw, trigamma_raw};

/// Mean/shape coordinates `(μ, κ)` of a gamma density, both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    mu: f64,
    kappa: f64,
}

impl GammaParams {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        Ok(GammaParams {
            mu: require_positive(mu, "mu")?,
            kappa: require_positive(kappa, "kappa")?,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Rate `κ/μ`.
    pub fn rate(&self) -> f64 {
        self.kappa / self.mu
    }

    /// Standard deviation `μ/√κ`.
    pub fn sigma(&self) -> f64 {
        self.mu / self.kappa.sqrt()
    }

    /// Coefficient of variation `σ/μ = 1/√κ`.
    pub fn cv(&self) -> f64 {
        1.0 / self.kappa.sqrt()
    }

    /// Density at `x`; zero for `x ≤ 0`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (mu, k) = (self.mu, self.kappa);
        let log = k * (k / mu).ln() + (k - 1.0) * x.ln() - x * k / mu - log_gamma_raw(k);
        log.exp()
    }

    /// Shannon entropy `κ − ln(κ/μ) + ln Γ(κ) − (κ−1) ψ(κ)`.
    pub fn entropy(&self) -> f64 {
        let (mu, k) = (self.mu, self.kappa);
        k - (k / mu).ln() + log_gamma_raw(k) - (k - 1.0) * digamma_raw(k)
    }

    /// Euclidean entropy gradient `(∂S/∂μ, ∂S/∂κ)`.
    ///
    /// `∂S/∂μ = 1/μ` and `∂S/∂κ = −(κ−1)(κψ'(κ) − 1)/κ`, which vanishes
    /// exactly at the exponential member `κ = 1`.
    pub fn entropy_gradient(&self) -> [f64; 2] {
        let (mu, k) = (self.mu, self.kappa);
        [1.0 / mu, -(k - 1.0) * (k * trigamma_raw(k) - 1.0) / k]
    }

    /// Fisher information metric at these coordinates.
    pub fn fisher_metric(&self) -> Metric2 {
        gamma_metric(self.mu, self.kappa)
    }
}

fn gamma_metric(mu: f64, kappa: f64) -> Metric2 {
    let g = [
        [kappa / (mu * mu), 0.0],
        [0.0, trigamma_raw(kappa) - 1.0 / kappa],
    ];
    let mut dg = [[[0.0; 2]; 2]; 2];
    dg[0][0][0] = -2.0 * kappa / (mu * mu * mu);
    dg[1][0][0] = 1.0 / (mu * mu);
    dg[1][1][1] = polygamma2_raw(kappa) + 1.0 / (kappa * kappa);
    Metric2::new(g, dg)
}

/// Fisher metric field over the `(μ, κ)` chart with exact partials.
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaFisherMetric;

impl MetricField for GammaFisherMetric {
    fn metric(&self, p: Point2) -> Result<Metric2> {
        let params = GammaParams::new(p[0], p[1])?;
        Ok(params.fisher_metric())
    }
}

/// Streaming accumulator for the sample mean, variance, and mean log,
/// the sufficient statistics of the gamma likelihood.
///
/// Uses Welford updates, so a single pass over the data is numerically
/// stable; `variance` is the population variance (divides by the count).
#[derive(Debug, Clone, Copy, Default)]
pub struct LogMomentAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
    mean_log: f64,
}

impl LogMomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds one observation in; `x` must be positive.
    pub fn push(&mut self, x: f64) {
        debug_assert!(x > 0.0, "observations must be positive");
        self.count += 1;
        let n = self.count as f64;
        let d = x - self.mean;
        self.mean += d / n;
        self.m2 += d * (x - self.mean);
        self.mean_log += (x.ln() - self.mean_log) / n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance `m2 / n`.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn mean_log(&self) -> f64 {
        self.mean_log
    }

    /// Log-moment gap `s = ln(mean) − mean(ln x) ≥ 0`, the quantity the
    /// shape likelihood equation `ln κ − ψ(κ) = s` is solved against.
    pub fn log_moment_gap(&self) -> f64 {
        self.mean.ln() - self.mean_log
    }

    /// Maximum-likelihood gamma fit of the accumulated sample.
    pub fn fit(&self) -> Result<GammaFit> {
        if self.count == 0 {
            return Err(Error::domain("cannot fit an empty sample"));
        }
        let mean = require_positive(self.mean, "sample mean")?;
        let s = self.log_moment_gap();
        if !s.is_finite() {
            return Err(Error::domain(format!("log-moment gap is {s}")));
        }
        if s <= DEGENERATE_GAP {
            return Err(Error::DegenerateSample(format!(
                "log-moment gap {s:.3e} is at the constant-sample limit"
            )));
        }
        let (kappa, residual, iterations) = solve_shape(s)?;
        Ok(GammaFit {
            params: GammaParams::new(mean, kappa)?,
            residual,
            iterations,
        })
    }
}

/// Result of a maximum-likelihood gamma fit: the fitted coordinates, the
/// final residual `|ln κ̂ − ψ(κ̂) − s|`, and the iteration count of the
/// shape solve.
#[derive(Debug, Clone, Copy)]
pub struct GammaFit {
    pub params: GammaParams,
    pub residual: f64,
    pub iterations: u32,
}

/// Below this log-moment gap the sample is treated as constant and the
/// shape solve refuses to run (the MLE diverges as `κ ~ 1/(2s)`).
const DEGENERATE_GAP: f64 = 1e-14;
const SHAPE_RESIDUAL_TOL: f64 = 1e-10;
const MAX_SHAPE_ITER: u32 = 200;

/// Maximum-likelihood fit of a gamma density to positive observations:
/// `μ̂` is the sample mean and `κ̂` solves `ln κ − ψ(κ) = s` with
/// `s = ln(mean) − mean(ln x)`.
///
/// The solve starts from the closed-form approximation
/// `κ₀ = (3 − s + √((s−3)² + 24s)) / (12s)` and runs Newton steps on
/// `f(κ) = ln κ − ψ(κ) − s` (with `f'(κ) = 1/κ − ψ'(κ)`), safeguarded by
/// a sign-change bracket that falls back to bisection whenever a step
/// leaves the bracket. Constant samples are rejected as degenerate.
pub fn fit_mle(data: &[f64]) -> Result<GammaFit> {
    if data.is_empty() {
        return Err(Error::domain("cannot fit an empty sample"));
    }
    let mut acc = LogMomentAccumulator::new();
    for &x in data {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain(format!(
                "observations must be positive and finite, got {x}"
            )));
        }
        acc.push(x);
    }
    acc.fit()
}

/// Solves `ln κ − ψ(κ) = s` for `κ > 0`; `f` is strictly decreasing from
/// `+∞` to `0`, so the root is unique for `s > 0`.
fn solve_shape(s: f64) -> Result<(f64, f64, u32)> {
    let f = |k: f64| k.ln() - digamma_raw(k) - s;

    // Initial bracket, widened until it straddles the root. For tiny `s`
    // the root sits near 1/(2s), far above the default ceiling.
    let mut lo = 1e-8;
    let mut hi = 1e8;
    while f(lo) <= 0.0 && lo > 1e-290 {
        lo /= 100.0;
    }
    while f(hi) >= 0.0 && hi < 1e290 {
        hi *= 100.0;
    }
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::Convergence(format!(
            "no bracket for the shape equation at gap {s:.6e}"
        )));
    }

    let start = (3.0 - s + ((s - 3.0) * (s - 3.0) + 24.0 * s).sqrt()) / (12.0 * s);
    let mut kappa = start.clamp(lo, hi);
    let mut iterations = 0;
    let mut fk = f(kappa);
    while iterations < MAX_SHAPE_ITER {
        iterations += 1;
        if fk > 0.0 {
            lo = kappa;
        } else {
            hi = kappa;
        }
        let fp = 1.0 / kappa - trigamma_raw(kappa);
        let newton = kappa - fk / fp;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - kappa).abs() <= 1e-15 * kappa {
            kappa = next;
            fk = f(kappa);
            break;
        }
        kappa = next;
        fk = f(kappa);
        if fk.abs() <= 1e-13 {
            break;
        }
    }
    let residual = fk.abs();
    if residual > SHAPE_RESIDUAL_TOL {
        return Err(Error::Convergence(format!(
            "shape solve stalled at residual {residual:.3e} for gap {s:.6e}"
        )));
    }
    Ok((kappa, residual, iterations))
}
