//! Weibull family in scale/shape coordinates, its reliability functions,
//! moments, and Shannon entropy.
//!
//! The density with scale `ξ` and shape `β` (both positive) is
//! `f(t) = (β/ξ)(t/ξ)^(β−1) exp(−(t/ξ)^β)` for `t > 0`, with reliability
//! `R(t) = exp(−(t/ξ)^β)` and hazard `Z(t) = β ξ^(−β) t^(β−1)`, so
//! `Z·R = f` identically. Entropy is `S = ln(ξ/β) + γ(1 − 1/β) + 1`,
//! maximal in `β` at `β = γ` (the Euler constant), where the shape
//! component of the gradient `(1/ξ, (γ−β)/β²)` changes sign.

use crate::error::{require_positive, Result};
use crate::specfun::{log_gamma_raw, EULER_GAMMA};

/// Scale/shape coordinates `(ξ, β)` of a Weibull density, both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullParams {
    xi: f64,
    beta: f64,
}

impl WeibullParams {
    pub fn new(xi: f64, beta: f64) -> Result<Self> {
        Ok(WeibullParams {
            xi: require_positive(xi, "xi")?,
            beta: require_positive(beta, "beta")?,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Density at `t`; zero for `t ≤ 0`.
    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.hazard(t) * self.reliability(t)
    }

    /// Survival probability `R(t) = exp(−(t/ξ)^β)`; one for `t ≤ 0`.
    pub fn reliability(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        (-(t / self.xi).powf(self.beta)).exp()
    }

    /// Failure rate `Z(t) = β ξ^(−β) t^(β−1)`; zero for `t ≤ 0`.
    pub fn hazard(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.beta / self.xi * (t / self.xi).powf(self.beta - 1.0)
    }

    /// Mean `ξ Γ(1 + 1/β)`.
    pub fn mean(&self) -> f64 {
        self.xi * log_gamma_raw(1.0 + 1.0 / self.beta).exp()
    }

    /// Standard deviation `ξ √(Γ(1 + 2/β) − Γ(1 + 1/β)²)`.
    pub fn sd(&self) -> f64 {
        let g1 = log_gamma_raw(1.0 + 1.0 / self.beta).exp();
        let g2 = log_gamma_raw(1.0 + 2.0 / self.beta).exp();
        self.xi * (g2 - g1 * g1).max(0.0).sqrt()
    }

    /// Coefficient of variation `√(Γ(1 + 2/β)/Γ(1 + 1/β)² − 1)`,
    /// independent of the scale.
    pub fn cv(&self) -> f64 {
        let lg1 = log_gamma_raw(1.0 + 1.0 / self.beta);
        let lg2 = log_gamma_raw(1.0 + 2.0 / self.beta);
        ((lg2 - 2.0 * lg1).exp() - 1.0).max(0.0).sqrt()
    }

    /// Shannon entropy `ln(ξ/β) + γ(1 − 1/β) + 1`.
    pub fn entropy(&self) -> f64 {
        (self.xi / self.beta).ln() + EULER_GAMMA * (1.0 - 1.0 / self.beta) + 1.0
    }

    /// Euclidean entropy gradient `(1/ξ, (γ−β)/β²)`; the shape component
    /// vanishes exactly at `β = γ`.
    pub fn entropy_gradient(&self) -> [f64; 2] {
        [
            1.0 / self.xi,
            (EULER_GAMMA - self.beta) / (self.beta * self.beta),
        ]
    }
}
