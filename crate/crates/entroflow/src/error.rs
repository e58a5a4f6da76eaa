//! Crate-wide error type.
//!
//! Every routine is total over its stated domain; inputs outside it are
//! reported as errors rather than silently propagated as NaN.

/// Errors produced by the numerical routines and pipelines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input lies outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative scheme exhausted its iteration budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The sample carries no shape information (all values equal).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Metric determinant vanished at the given point.
    #[error("singular metric at ({x}, {y}): det = {det:e}")]
    SingularMetric { x: f64, y: f64, det: f64 },

    /// Integration step must be positive and finite.
    #[error("invalid step size: {0}")]
    InvalidStep(f64),

    /// A computed value turned non-finite at the given coordinates.
    #[error("non-finite value at ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    /// The entropy has no stationary point inside the open correlation
    /// interval for this shape parameter.
    #[error("no interior entropy maximum for alpha2 = {alpha2}")]
    NoInteriorMaximum { alpha2: f64 },

    /// Requested work exceeds the configured budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Input sequence violates a required ordering.
    #[error("ordering error: {0}")]
    Ordering(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn require_positive(value: f64, name: &str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
