//! McKay bivariate gamma family, its Fisher geometry, and the entropy
//! functional on the unit-shape submanifold with its maximum locus.
//!
//! The density with shapes `α₁, α₂` and rate `c` (all positive) lives on
//! the wedge `0 < x < y`:
//!
//! `m(x, y) = c^(α₁+α₂) x^(α₁−1) (y−x)^(α₂−1) e^(−cy) / (Γ(α₁) Γ(α₂))`,
//!
//! equivalently `X` and `Y−X` are independent gammas with shapes `α₁, α₂`
//! and common rate `c`. Marginals are gamma, the correlation is
//! `ρ = √(α₁/(α₁+α₂))`, and the covariance is `α₁/c²`.
//!
//! The mean log density `K = E[ln m]` has the closed form
//! `K = ln(c²/(Γ(α₁)Γ(α₂))) + (α₁−1)ψ(α₁) + (α₂−1)ψ(α₂) − (α₁+α₂)`, so the
//! Shannon entropy is `−K`. The entropy functional studied here is the
//! weighted form `√α₁ c^(−α₁−1) K`; restricted to the submanifold `α₁ = 1`
//! it becomes `K/c²` and admits, for each `α₂`, a unique interior maximum
//! along the correlation coordinate whenever
//! `(α₂−1)ψ(α₂) − ln Γ(α₂) − (1+α₂) < 1`.

use crate::error::{require_positive, Error, Result};
use crate::gamma::GammaParams;
use crate::geometry::{Metric2, MetricField, Point2};
use crate::specfun::{digamma_raw, log_gamma_raw, polygamma2_raw, trigamma_raw};

/// Shape/rate/shape coordinates `(α₁, c, α₂)` of a McKay density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McKayParams {
    alpha1: f64,
    c: f64,
    alpha2: f64,
}

impl McKayParams {
    pub fn new(alpha1: f64, c: f64, alpha2: f64) -> Result<Self> {
        Ok(McKayParams {
            alpha1: require_positive(alpha1, "alpha1")?,
            c: require_positive(c, "c")?,
            alpha2: require_positive(alpha2, "alpha2")?,
        })
    }

    /// Coordinates `(α₁, σ₁₂, α₂)` with the covariance in place of the
    /// rate: `c = √(α₁/σ₁₂)`.
    pub fn from_sigma_chart(alpha1: f64, sigma12: f64, alpha2: f64) -> Result<Self> {
        let sigma12 = require_positive(sigma12, "sigma12")?;
        let alpha1 = require_positive(alpha1, "alpha1")?;
        McKayParams::new(alpha1, (alpha1 / sigma12).sqrt(), alpha2)
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Density at `(x, y)`; zero outside the wedge `0 < x < y`.
    pub fn pdf(&self, x: f64, y: f64) -> f64 {
        if !(x > 0.0 && y > x) {
            return 0.0;
        }
        let (a1, c, a2) = (self.alpha1, self.c, self.alpha2);
        let log = (a1 + a2) * c.ln() + (a1 - 1.0) * x.ln() + (a2 - 1.0) * (y - x).ln()
            - c * y
            - log_gamma_raw(a1)
            - log_gamma_raw(a2);
        log.exp()
    }

    /// Marginal of `X`: gamma with mean `α₁/c` and shape `α₁`.
    pub fn marginal_x(&self) -> GammaParams {
        GammaParams::new(self.alpha1 / self.c, self.alpha1)
            .expect("positive coordinates give a valid marginal")
    }

    /// Marginal of `Y`: gamma with mean `(α₁+α₂)/c` and shape `α₁+α₂`.
    pub fn marginal_y(&self) -> GammaParams {
        let shape = self.alpha1 + self.alpha2;
        GammaParams::new(shape / self.c, shape).expect("positive coordinates give a valid marginal")
    }

    /// Pearson correlation `√(α₁/(α₁+α₂))`, in `(0, 1)`.
    pub fn correlation(&self) -> f64 {
        (self.alpha1 / (self.alpha1 + self.alpha2)).sqrt()
    }

    /// Covariance `σ₁₂ = α₁/c²`.
    pub fn covariance(&self) -> f64 {
        self.alpha1 / (self.c * self.c)
    }

    /// Mean log density `K = E[ln m]`, in closed form
    /// `ln(c²/(Γ(α₁)Γ(α₂))) + (α₁−1)ψ(α₁) + (α₂−1)ψ(α₂) − (α₁+α₂)`.
    pub fn mean_log_density(&self) -> f64 {
        let (a1, c, a2) = (self.alpha1, self.c, self.alpha2);
        2.0 * c.ln() - log_gamma_raw(a1) - log_gamma_raw(a2)
            + (a1 - 1.0) * digamma_raw(a1)
            + (a2 - 1.0) * digamma_raw(a2)
            - (a1 + a2)
    }

    /// Shannon entropy `−E[ln m]`.
    pub fn shannon_entropy(&self) -> f64 {
        -self.mean_log_density()
    }

    /// Weighted mean log density `√α₁ c^(−α₁−1) E[ln m]`, the entropy
    /// functional whose `α₁ = 1` restriction is maximized along the locus.
    pub fn entropy_functional(&self) -> f64 {
        self.alpha1.sqrt() * self.c.powf(-self.alpha1 - 1.0) * self.mean_log_density()
    }

    /// Fisher information metric in `(α₁, c, α₂)` order:
    /// `[[ψ'(α₁), −1/c, 0], [−1/c, (α₁+α₂)/c², −1/c], [0, −1/c, ψ'(α₂)]]`.
    pub fn fisher_metric(&self) -> [[f64; 3]; 3] {
        let (a1, c, a2) = (self.alpha1, self.c, self.alpha2);
        let rc = -1.0 / c;
        [
            [trigamma_raw(a1), rc, 0.0],
            [rc, (a1 + a2) / (c * c), rc],
            [0.0, rc, trigamma_raw(a2)],
        ]
    }
}

/// Point of the unit-shape submanifold `α₁ = 1` in the `(c, α₂)` chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M1Point {
    c: f64,
    alpha2: f64,
}

impl M1Point {
    pub fn new(c: f64, alpha2: f64) -> Result<Self> {
        Ok(M1Point {
            c: require_positive(c, "c")?,
            alpha2: require_positive(alpha2, "alpha2")?,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// Correlation of the underlying density, `ρ = 1/√(1+α₂)`.
    pub fn rho(&self) -> f64 {
        1.0 / (1.0 + self.alpha2).sqrt()
    }

    /// The same point as a full-family parameter triple.
    pub fn to_full(&self) -> McKayParams {
        McKayParams::new(1.0, self.c, self.alpha2)
            .expect("positive coordinates embed in the full family")
    }

    /// Entropy functional of the chart,
    /// `(1/c²)(ln(c²/Γ(α₂)) + (α₂−1)ψ(α₂) − (1+α₂))`; this is `−S/c²`
    /// for the Shannon entropy `S` of the density.
    pub fn entropy(&self) -> f64 {
        let (c, a2) = (self.c, self.alpha2);
        (2.0 * c.ln() - log_gamma_raw(a2) + (a2 - 1.0) * digamma_raw(a2) - (1.0 + a2)) / (c * c)
    }

    /// Euclidean gradient of [`entropy`](Self::entropy) in `(c, α₂)`:
    /// `∂c = (2/c³)(ln(Γ(α₂)/c²) − (α₂−1)ψ(α₂) + α₂ + 2)` and
    /// `∂α₂ = ((α₂−1)ψ'(α₂) − 1)/c²`.
    pub fn entropy_gradient(&self) -> [f64; 2] {
        let (c, a2) = (self.c, self.alpha2);
        let dc = 2.0 / (c * c * c)
            * (log_gamma_raw(a2) - 2.0 * c.ln() - (a2 - 1.0) * digamma_raw(a2) + a2 + 2.0);
        let da = ((a2 - 1.0) * trigamma_raw(a2) - 1.0) / (c * c);
        [dc, da]
    }

    /// Fisher metric of the submanifold,
    /// `[[(1+α₂)/c², −1/c], [−1/c, ψ'(α₂)]]`, the central 2×2 block of the
    /// full metric at `α₁ = 1`.
    pub fn metric(&self) -> Metric2 {
        let (c, a2) = (self.c, self.alpha2);
        let g = [
            [(1.0 + a2) / (c * c), -1.0 / c],
            [-1.0 / c, trigamma_raw(a2)],
        ];
        let mut dg = [[[0.0; 2]; 2]; 2];
        dg[0][0][0] = -2.0 * (1.0 + a2) / (c * c * c);
        dg[1][0][0] = 1.0 / (c * c);
        dg[0][0][1] = 1.0 / (c * c);
        dg[0][1][0] = 1.0 / (c * c);
        dg[1][1][1] = polygamma2_raw(a2);
        Metric2::new(g, dg)
    }
}

/// Fisher metric field over the `(c, α₂)` chart with exact partials.
#[derive(Debug, Clone, Copy, Default)]
pub struct M1FisherMetric;

impl MetricField for M1FisherMetric {
    fn metric(&self, p: Point2) -> Result<Metric2> {
        Ok(M1Point::new(p[0], p[1])?.metric())
    }
}

fn check_rho(rho: f64) -> Result<f64> {
    if rho.is_finite() && rho > 0.0 && rho <= 1.0 {
        Ok(rho)
    } else {
        Err(Error::domain(format!(
            "correlation must lie in (0, 1], got {rho}"
        )))
    }
}

/// Rate fixed by the correlation chart, `c = (1+ρ²)/(2ρ²)`; decreases from
/// `+∞` to `1` as `ρ` runs over `(0, 1]`.
pub fn c_from_rho(rho: f64) -> Result<f64> {
    let rho = check_rho(rho)?;
    Ok((1.0 + rho * rho) / (2.0 * rho * rho))
}

/// Second shape from the correlation, `α₂ = 1/ρ² − 1` for `ρ ∈ (0, 1)`.
pub fn alpha2_from_rho(rho: f64) -> Result<f64> {
    let rho = check_rho(rho)?;
    if rho >= 1.0 {
        return Err(Error::domain("alpha2 vanishes at full correlation"));
    }
    Ok(1.0 / (rho * rho) - 1.0)
}

/// Constant part of the chart entropy,
/// `A(α₂) = (α₂−1)ψ(α₂) − ln Γ(α₂) − (1+α₂)`.
fn chart_offset(alpha2: f64) -> f64 {
    (alpha2 - 1.0) * digamma_raw(alpha2) - log_gamma_raw(alpha2) - (1.0 + alpha2)
}

/// Submanifold entropy in the correlation chart,
/// `(4ρ⁴/(1+ρ²)²)(ln((1+ρ²)²/(4ρ⁴ Γ(α₂))) + (α₂−1)ψ(α₂) − (1+α₂))`
/// for `ρ ∈ (0, 1]`; equals the `(c, α₂)` chart entropy at `c(ρ)`.
pub fn m1_entropy_rho(alpha2: f64, rho: f64) -> Result<f64> {
    let alpha2 = require_positive(alpha2, "alpha2")?;
    let rho = check_rho(rho)?;
    let c = (1.0 + rho * rho) / (2.0 * rho * rho);
    let u = c * c;
    Ok((u.ln() + chart_offset(alpha2)) / u)
}

/// Exact `∂S/∂ρ` of [`m1_entropy_rho`]: with `u = c(ρ)²`,
/// `dS/dρ = (1 − ln u − A(α₂))/u² · du/dρ` and `du/dρ = −(1+ρ²)/ρ⁵`.
pub fn m1_entropy_rho_derivative(alpha2: f64, rho: f64) -> Result<f64> {
    let alpha2 = require_positive(alpha2, "alpha2")?;
    let rho = check_rho(rho)?;
    let c = (1.0 + rho * rho) / (2.0 * rho * rho);
    let u = c * c;
    let du = -(1.0 + rho * rho) / rho.powi(5);
    Ok((1.0 - u.ln() - chart_offset(alpha2)) / (u * u) * du)
}

/// Exact Euclidean gradient of [`m1_entropy_rho`] in `(α₂, ρ)` order:
/// the `α₂` component is `((α₂−1)ψ'(α₂) − 1)/c(ρ)²`, the `ρ` component is
/// [`m1_entropy_rho_derivative`].
pub fn m1_entropy_rho_gradient(alpha2: f64, rho: f64) -> Result<[f64; 2]> {
    let d_rho = m1_entropy_rho_derivative(alpha2, rho)?;
    let c = (1.0 + rho * rho) / (2.0 * rho * rho);
    let d_a2 = ((alpha2 - 1.0) * trigamma_raw(alpha2) - 1.0) / (c * c);
    Ok([d_a2, d_rho])
}

/// Interior maximum of the chart entropy along the correlation coordinate.
#[derive(Debug, Clone, Copy)]
pub struct LocusPoint {
    pub alpha2: f64,
    pub rho: f64,
    /// `|∂S/∂ρ|` at the returned root.
    pub residual: f64,
}

const LOCUS_GRID: usize = 64;
const LOCUS_TOL: f64 = 1e-10;

/// Finds the interior maximum `ρ*(α₂)` of `ρ ↦ m1_entropy_rho(α₂, ρ)`.
///
/// The derivative changes sign exactly once on `(0, 1)` when
/// `A(α₂) < 1`; the root is bracketed on a 64-point log-spaced grid over
/// `[1e-6, 1 − 1e-6]` and bisected until `|∂S/∂ρ| ≤ 1e-10`. For small
/// `α₂` (`A(α₂) ≥ 1`) the entropy increases all the way to `ρ = 1` and
/// there is no interior maximum.
pub fn max_entropy_locus(alpha2: f64) -> Result<LocusPoint> {
    let alpha2 = require_positive(alpha2, "alpha2")?;
    let deriv =
        |rho: f64| m1_entropy_rho_derivative(alpha2, rho).expect("grid stays inside the chart");

    let lg_lo = (1e-6f64).log10();
    let lg_hi = (1.0 - 1e-6f64).log10();
    let grid: Vec<f64> = (0..LOCUS_GRID)
        .map(|i| {
            let t = i as f64 / (LOCUS_GRID - 1) as f64;
            10f64.powf(lg_lo + (lg_hi - lg_lo) * t)
        })
        .collect();

    let mut bracket = None;
    let mut prev = (grid[0], deriv(grid[0]));
    for &rho in &grid[1..] {
        let d = deriv(rho);
        if d == 0.0 {
            return Ok(LocusPoint {
                alpha2,
                rho,
                residual: 0.0,
            });
        }
        if prev.1 > 0.0 && d < 0.0 {
            bracket = Some((prev.0, rho));
            break;
        }
        prev = (rho, d);
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoInteriorMaximum { alpha2 })?;

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = deriv(mid);
        if d.abs() <= LOCUS_TOL || hi - lo <= f64::EPSILON * mid {
            return Ok(LocusPoint {
                alpha2,
                rho: mid,
                residual: d.abs(),
            });
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence(format!(
        "locus bisection stalled for alpha2 = {alpha2}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FdMetric, Partials};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn rejects_nonpositive_coordinates() {
        assert!(McKayParams::new(0.0, 1.0, 1.0).is_err());
        assert!(McKayParams::new(1.0, -1.0, 1.0).is_err());
        assert!(McKayParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(M1Point::new(0.0, 1.0).is_err());
        assert!(M1Point::new(1.0, -2.0).is_err());
    }

    #[test]
    fn pdf_vanishes_off_the_wedge() {
        let m = McKayParams::new(2.0, 1.0, 3.0).unwrap();
        assert_eq!(m.pdf(-1.0, 1.0), 0.0);
        assert_eq!(m.pdf(0.0, 1.0), 0.0);
        assert_eq!(m.pdf(1.0, 1.0), 0.0);
        assert_eq!(m.pdf(2.0, 1.0), 0.0);
        assert!(m.pdf(1.0, 2.0) > 0.0);
    }

    #[test]
    fn pdf_closed_form_at_unit_shapes() {
        // α₁ = α₂ = 1, c = 1: m = e^{−y} on the wedge.
        let m = McKayParams::new(1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(m.pdf(0.3, 1.0), (-1.0f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(m.pdf(0.9, 2.5), (-2.5f64).exp(), epsilon = 1e-14);
    }

    #[test]
    fn marginals_are_the_component_gammas() {
        let m = McKayParams::new(2.0, 0.5, 3.0).unwrap();
        let mx = m.marginal_x();
        assert_abs_diff_eq!(mx.mu(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mx.kappa(), 2.0, epsilon = 1e-15);
        let my = m.marginal_y();
        assert_abs_diff_eq!(my.mu(), 10.0, epsilon = 1e-15);
        assert_abs_diff_eq!(my.kappa(), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn marginals_cannot_both_be_exponential() {
        // The Y shape exceeds the X shape by α₂ > 0, so κ = 1 can hold for
        // at most one marginal.
        for &(a1, c, a2) in &[(1.0, 1.0, 1.0), (0.4, 2.0, 0.6), (1.0, 0.3, 5.0)] {
            let m = McKayParams::new(a1, c, a2).unwrap();
            assert!(m.marginal_y().kappa() > m.marginal_x().kappa());
        }
    }

    #[test]
    fn correlation_and_covariance_frozen() {
        let m = McKayParams::new(2.0, 0.5, 3.0).unwrap();
        assert_abs_diff_eq!(m.correlation(), 0.6324555320336759, epsilon = 1e-15);
        assert_abs_diff_eq!(m.covariance(), 8.0, epsilon = 1e-15);
    }

    #[test]
    fn sigma_chart_roundtrip() {
        let m = McKayParams::from_sigma_chart(2.0, 8.0, 3.0).unwrap();
        assert_abs_diff_eq!(m.c(), 0.5, epsilon = 1e-15);
        let back = McKayParams::from_sigma_chart(m.alpha1(), m.covariance(), m.alpha2()).unwrap();
        assert_abs_diff_eq!(back.c(), m.c(), epsilon = 1e-14);
    }

    #[test]
    fn mean_log_density_frozen() {
        let m = McKayParams::new(2.0, 0.5, 3.0).unwrap();
        assert_abs_diff_eq!(m.mean_log_density(), -4.811088536384435, epsilon = 1e-13);
        assert_abs_diff_eq!(m.shannon_entropy(), 4.811088536384435, epsilon = 1e-13);
        assert_abs_diff_eq!(m.entropy_functional(), -54.43125326346073, epsilon = 1e-11);
    }

    #[test]
    fn fisher_metric_frozen_at_ones() {
        let m = McKayParams::new(1.0, 1.0, 1.0).unwrap();
        let g = m.fisher_metric();
        let p1 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert_abs_diff_eq!(g[0][0], p1, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1][1], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[2][2], p1, epsilon = 1e-12);
        assert_eq!(g[0][2], 0.0);
        assert_abs_diff_eq!(g[0][1], -1.0, epsilon = 1e-15);
        let det = det3(&g);
        assert_abs_diff_eq!(det, 2.121748034859238, epsilon = 1e-12);
    }

    fn det3(g: &[[f64; 3]; 3]) -> f64 {
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }

    #[test]
    fn fisher_determinant_closed_form() {
        // det = (ψ'(α₁)ψ'(α₂)(α₁+α₂) − ψ'(α₁) − ψ'(α₂))/c².
        for &(a1, c, a2) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 3.0), (0.7, 2.0, 1.3)] {
            let m = McKayParams::new(a1, c, a2).unwrap();
            let t1 = crate::specfun::trigamma(a1).unwrap();
            let t2 = crate::specfun::trigamma(a2).unwrap();
            let expect = (t1 * t2 * (a1 + a2) - t1 - t2) / (c * c);
            assert_abs_diff_eq!(det3(&m.fisher_metric()), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn submanifold_metric_is_the_central_block() {
        let p = M1Point::new(1.7, 2.3).unwrap();
        let full = p.to_full().fisher_metric();
        let m = p.metric();
        assert_abs_diff_eq!(m.g[0][0], full[1][1], epsilon = 1e-15);
        assert_abs_diff_eq!(m.g[0][1], full[1][2], epsilon = 1e-15);
        assert_abs_diff_eq!(m.g[1][1], full[2][2], epsilon = 1e-15);
    }

    #[test]
    fn submanifold_metric_partials_match_finite_differences() {
        let exact = M1FisherMetric;
        let fd = FdMetric::new(|p: Point2| exact.metric(p).map(|m| m.g));
        assert_eq!(exact.partials(), Partials::Exact);
        for &p in &[[1.0, 1.0], [0.5, 3.0], [2.5, 0.8]] {
            let me = exact.metric(p).unwrap();
            let mf = fd.metric(p).unwrap();
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(
                            (me.dg[k][i][j] - mf.dg[k][i][j]).abs() <= 1e-5,
                            "dg[{k}][{i}][{j}] at {p:?}: {} vs {}",
                            me.dg[k][i][j],
                            mf.dg[k][i][j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn submanifold_entropy_frozen_and_consistent() {
        let p = M1Point::new(1.2, 2.5).unwrap();
        assert_abs_diff_eq!(p.entropy(), -1.642572774942462, epsilon = 1e-13);
        // Equals −S/c² for the Shannon entropy of the embedded density.
        let c2 = p.c() * p.c();
        assert_abs_diff_eq!(
            p.entropy(),
            -p.to_full().shannon_entropy() / c2,
            epsilon = 1e-13
        );
        // And matches the full-family weighted functional at α₁ = 1.
        assert_abs_diff_eq!(
            p.entropy(),
            p.to_full().entropy_functional(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn submanifold_gradient_frozen_and_finite_difference() {
        let p = M1Point::new(1.2, 2.5).unwrap();
        let g = p.entropy_gradient();
        assert_abs_diff_eq!(g[0], 3.895028698978177, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], -0.18365511517336646, epsilon = 1e-13);
        let h = 1e-6;
        let s = |c: f64, a: f64| M1Point::new(c, a).unwrap().entropy();
        for &(c, a2) in &[(1.2, 2.5), (0.7, 1.1), (3.0, 0.6)] {
            let g = M1Point::new(c, a2).unwrap().entropy_gradient();
            let dc = (s(c + h, a2) - s(c - h, a2)) / (2.0 * h);
            let da = (s(c, a2 + h) - s(c, a2 - h)) / (2.0 * h);
            assert_abs_diff_eq!(g[0], dc, epsilon = 1e-5);
            assert_abs_diff_eq!(g[1], da, epsilon = 1e-6);
        }
    }

    #[test]
    fn rho_conversions() {
        let p = M1Point::new(2.0, 3.0).unwrap();
        assert_abs_diff_eq!(p.rho(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha2_from_rho(0.5).unwrap(), 3.0, epsilon = 1e-12);
        // c(ρ) decreases to 1 at full correlation.
        assert_abs_diff_eq!(c_from_rho(1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c_from_rho(0.5).unwrap(), 2.5, epsilon = 1e-15);
        assert!(c_from_rho(0.0).is_err());
        assert!(c_from_rho(1.5).is_err());
        assert!(alpha2_from_rho(1.0).is_err());
    }

    #[test]
    fn rho_alpha2_roundtrip_is_identity() {
        for i in 1..99 {
            let rho = i as f64 / 100.0;
            let a2 = alpha2_from_rho(rho).unwrap();
            let back = M1Point::new(1.0, a2).unwrap().rho();
            assert_abs_diff_eq!(back, rho, epsilon = 1e-12);
        }
    }

    #[test]
    fn submanifold_gradient_closed_form_point() {
        // At (c, α₂) = (1, 2): ∂c = 2(4 − ψ(2)) = 2(3 + γ), ∂α₂ = ψ'(2) − 1.
        let g = M1Point::new(1.0, 2.0).unwrap().entropy_gradient();
        assert_abs_diff_eq!(
            g[0],
            2.0 * (3.0 + crate::specfun::EULER_GAMMA),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            g[1],
            crate::specfun::trigamma(2.0).unwrap() - 1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rho_chart_entropy_frozen() {
        // At ρ = 1 the prefactor is 1 and only the offset remains: A(1) = −2.
        assert_abs_diff_eq!(m1_entropy_rho(1.0, 1.0).unwrap(), -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            m1_entropy_rho(2.0, 0.5).unwrap(),
            -0.11914147218451564,
            epsilon = 1e-13
        );
        // At α₂ = 1 the entropy crosses zero where c(ρ)² = e², i.e. at
        // ρ = 1/√(2e − 1).
        let rho_zero = 1.0 / (2.0 * std::f64::consts::E - 1.0).sqrt();
        assert_abs_diff_eq!(m1_entropy_rho(1.0, rho_zero).unwrap(), 0.0, epsilon = 1e-14);
        assert!(m1_entropy_rho(1.0, 0.0).is_err());
        assert!(m1_entropy_rho(0.0, 0.5).is_err());
        assert!(m1_entropy_rho(1.0, 1.5).is_err());
    }

    #[test]
    fn rho_chart_agrees_with_rate_chart() {
        for &(rho, a2) in &[(0.2, 1.0), (0.5, 2.0), (0.9, 0.7), (1.0, 3.0)] {
            let via_c = M1Point::new(c_from_rho(rho).unwrap(), a2)
                .unwrap()
                .entropy();
            let direct = m1_entropy_rho(a2, rho).unwrap();
            assert_abs_diff_eq!(via_c, direct, epsilon = 1e-13);
        }
    }

    #[test]
    fn rho_derivative_frozen() {
        assert_abs_diff_eq!(
            m1_entropy_rho_derivative(2.0, 0.5).unwrap(),
            -1.7865054219809,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rho_chart_gradient_matches_finite_differences() {
        let h = 1e-7;
        for &(a2, rho) in &[(1.0, 0.3), (2.5, 0.6), (0.8, 0.45)] {
            let g = m1_entropy_rho_gradient(a2, rho).unwrap();
            let da = (m1_entropy_rho(a2 + h, rho).unwrap() - m1_entropy_rho(a2 - h, rho).unwrap())
                / (2.0 * h);
            let dr = (m1_entropy_rho(a2, rho + h).unwrap() - m1_entropy_rho(a2, rho - h).unwrap())
                / (2.0 * h);
            assert_abs_diff_eq!(g[0], da, epsilon = 1e-5);
            assert_abs_diff_eq!(g[1], dr, epsilon = 1e-5);
        }
    }

    #[test]
    fn locus_frozen_values() {
        let l1 = max_entropy_locus(1.0).unwrap();
        assert_abs_diff_eq!(l1.rho, 0.3543654159938571, epsilon = 1e-8);
        assert!(l1.residual <= 1e-10);
        // Analytic reduction at α₂ = 1: c(ρ*)² = e³.
        let r2 = l1.rho * l1.rho;
        let u = (1.0 + r2) * (1.0 + r2) / (4.0 * r2 * r2);
        assert_abs_diff_eq!(u, 3.0f64.exp(), epsilon = 1e-7);
        let l2 = max_entropy_locus(2.0).unwrap();
        assert_abs_diff_eq!(l2.rho, 0.30203018531763224, epsilon = 1e-8);
        let l4 = max_entropy_locus(4.0).unwrap();
        assert_abs_diff_eq!(l4.rho, 0.26771981916188652, epsilon = 1e-8);
        // Strictly decreasing in α₂.
        assert!(l1.rho > l2.rho && l2.rho > l4.rho);
    }

    #[test]
    fn locus_vanishes_for_small_alpha2() {
        assert!(matches!(
            max_entropy_locus(0.2),
            Err(Error::NoInteriorMaximum { .. })
        ));
        // Just above the threshold the maximum exists near ρ = 1.
        let l = max_entropy_locus(0.3).unwrap();
        assert_abs_diff_eq!(l.rho, 0.6732145491243262, epsilon = 1e-8);
    }

    proptest! {
        #[test]
        fn correlation_lies_in_the_open_interval(
            a1 in 0.01f64..50.0,
            c in 0.01f64..50.0,
            a2 in 0.01f64..50.0,
        ) {
            let m = McKayParams::new(a1, c, a2).unwrap();
            let rho = m.correlation();
            prop_assert!(rho > 0.0 && rho < 1.0);
        }

        #[test]
        fn fisher_metric_is_positive_definite(
            a1 in 0.05f64..20.0,
            c in 0.05f64..20.0,
            a2 in 0.05f64..20.0,
        ) {
            let g = McKayParams::new(a1, c, a2).unwrap().fisher_metric();
            let m1 = g[0][0];
            let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let m3 = det3(&g);
            prop_assert!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0);
        }

        #[test]
        fn submanifold_metric_is_positive_definite(
            c in 0.05f64..20.0,
            a2 in 0.05f64..20.0,
        ) {
            let m = M1Point::new(c, a2).unwrap().metric();
            prop_assert!(m.g[0][0] > 0.0);
            prop_assert!(m.det() > 0.0);
        }

        #[test]
        fn rho_derivative_matches_finite_differences(
            rho in 0.05f64..0.95,
            a2 in 0.5f64..5.0,
        ) {
            let h = 1e-7;
            let d = m1_entropy_rho_derivative(a2, rho).unwrap();
            let fd = (m1_entropy_rho(a2, rho + h).unwrap()
                - m1_entropy_rho(a2, rho - h).unwrap()) / (2.0 * h);
            prop_assert!((d - fd).abs() <= 1e-5 * d.abs().max(1.0));
        }

        #[test]
        fn locus_matches_the_closed_form(a2 in 0.5f64..8.0) {
            // The critical point satisfies ln u* = 1 − A, so
            // ρ* = 1/√(2√u* − 1).
            let locus = max_entropy_locus(a2).unwrap();
            let a = (a2 - 1.0) * crate::specfun::digamma(a2).unwrap()
                - crate::specfun::log_gamma(a2).unwrap() - (1.0 + a2);
            let c_star = ((1.0 - a) / 2.0).exp();
            let rho_star = 1.0 / (2.0 * c_star - 1.0).sqrt();
            prop_assert!((locus.rho - rho_star).abs() <= 1e-8);
            prop_assert!(locus.residual <= 1e-10);
        }

        #[test]
        fn locus_maximizes_the_chart_entropy(
            a2 in 0.5f64..8.0,
            rho in 0.01f64..1.0,
        ) {
            let locus = max_entropy_locus(a2).unwrap();
            let s_star = m1_entropy_rho(a2, locus.rho).unwrap();
            let s = m1_entropy_rho(a2, rho).unwrap();
            prop_assert!(s <= s_star + 1e-10);
        }
    }
}
