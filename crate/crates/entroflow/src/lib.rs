//! Numerical toolkit for the information geometry of three distribution
//! families and the entropy statistics of prime spacings.
//!
//! The crate has three layers:
//!
//! * [`specfun`] — log-gamma, digamma, trigamma, third polygamma, and the
//!   regularized lower incomplete gamma function, accurate to near machine
//!   precision on the positive axis.
//! * Parameter manifolds — [`gamma`] (mean/shape chart), [`mckay`] (bivariate
//!   gamma on `0 < x < y`, with its `alpha1 = 1` submanifold and correlation
//!   chart), and [`weibull`]. Each family exposes densities, Shannon-entropy
//!   surfaces, entropy gradients, and (where defined) Fisher-Rao metrics.
//! * [`geometry`] — Christoffel symbols, geodesic shooting, arc length,
//!   entropy gradient flows, and grid evaluation over any 2D metric field,
//!   plus [`primes`], a segmented sieve with per-block gap statistics and a
//!   fitted-gamma gap histogram.
//!
//! All routines are deterministic: equal inputs produce bit-equal outputs.

pub mod error;
pub mod gamma;
pub mod geometry;
pub mod mckay;
pub mod primes;
pub mod specfun;
pub mod weibull;

pub use error::{Error, Result};
pub use gamma::{GammaFit, GammaParams};
pub use geometry::{GridField, Metric2, MetricField, Point2, Trajectory};
pub use mckay::{M1Point, McKayParams};
pub use primes::{GapHistogram, SpacingStats};
pub use weibull::WeibullParams;
