//! Riemannian machinery over 2D parameter manifolds.
//!
//! A [`MetricField`] yields the metric tensor and its coordinate partials at
//! a point; from it this module builds Christoffel symbols
//! `Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)`, fixed-step RK4
//! geodesic shooting, polyline arc length `Σ √(Δxᵀ g Δx)` with midpoint
//! metric evaluation, steepest-ascent entropy flows `ċ = ∇S(c)`, and grid
//! evaluation of scalar fields.
//!
//! Parameter domains are open positive quadrants. Geodesics truncate (with a
//! flag) within `1e-6` of the boundary; gradient flows truncate when a
//! coordinate leaves `(1e-8, 1e8)`.

use crate::error::{Error, Result};

pub type Point2 = [f64; 2];

/// Geodesics stop when a coordinate comes within this margin of zero.
const GEODESIC_MARGIN: f64 = 1e-6;
/// Gradient flows stay inside the box `(FLOW_LO, FLOW_HI)²`.
const FLOW_LO: f64 = 1e-8;
const FLOW_HI: f64 = 1e8;
/// Metric determinants at or below this are treated as singular.
const SINGULAR_DET: f64 = 1e-14;

/// Metric tensor at a point together with its coordinate partials.
///
/// `dg[k][i][j] = ∂_k g_ij`.
#[derive(Debug, Clone, Copy)]
pub struct Metric2 {
    pub g: [[f64; 2]; 2],
    pub dg: [[[f64; 2]; 2]; 2],
}

impl Metric2 {
    pub fn new(g: [[f64; 2]; 2], dg: [[[f64; 2]; 2]; 2]) -> Self {
        Metric2 { g, dg }
    }

    pub fn det(&self) -> f64 {
        self.g[0][0] * self.g[1][1] - self.g[0][1] * self.g[1][0]
    }

    /// Quadratic form `vᵀ g v`.
    pub fn quadratic(&self, v: Point2) -> f64 {
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += v[i] * self.g[i][j] * v[j];
            }
        }
        q
    }

    /// Metric norm `√(vᵀ g v)`.
    pub fn speed(&self, v: Point2) -> f64 {
        self.quadratic(v).max(0.0).sqrt()
    }
}

/// How a field obtains the metric partials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partials {
    Exact,
    FiniteDifference,
}

/// A field of metric tensors over a 2D chart with positive-quadrant domain.
pub trait MetricField {
    fn metric(&self, p: Point2) -> Result<Metric2>;

    fn partials(&self) -> Partials {
        Partials::Exact
    }
}

/// Flat Euclidean metric; geodesics are straight lines.
#[derive(Debug, Clone, Copy, Default)]
pub struct EuclideanMetric;

impl MetricField for EuclideanMetric {
    fn metric(&self, _p: Point2) -> Result<Metric2> {
        Ok(Metric2::new([[1.0, 0.0], [0.0, 1.0]], [[[0.0; 2]; 2]; 2]))
    }
}

/// Central-difference partials for a metric given only pointwise,
/// with step `h_i = max(1e-6, 1e-6 |x_i|)` per coordinate.
pub struct FdMetric<F> {
    eval: F,
}

impl<F> FdMetric<F>
where
    F: Fn(Point2) -> Result<[[f64; 2]; 2]>,
{
    pub fn new(eval: F) -> Self {
        FdMetric { eval }
    }
}

pub(crate) fn fd_step(x: f64) -> f64 {
    (1e-6 * x.abs()).max(1e-6)
}

impl<F> MetricField for FdMetric<F>
where
    F: Fn(Point2) -> Result<[[f64; 2]; 2]>,
{
    fn metric(&self, p: Point2) -> Result<Metric2> {
        let g = (self.eval)(p)?;
        let mut dg = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            let h = fd_step(p[k]);
            let mut hi = p;
            hi[k] += h;
            let mut lo = p;
            lo[k] -= h;
            let ghi = (self.eval)(hi)?;
            let glo = (self.eval)(lo)?;
            for i in 0..2 {
                for j in 0..2 {
                    dg[k][i][j] = (ghi[i][j] - glo[i][j]) / (2.0 * h);
                }
            }
        }
        Ok(Metric2::new(g, dg))
    }

    fn partials(&self) -> Partials {
        Partials::FiniteDifference
    }
}

/// Christoffel symbols of the second kind, `out[k][i][j] = Γ^k_ij`.
pub fn christoffel<M: MetricField + ?Sized>(field: &M, p: Point2) -> Result<[[[f64; 2]; 2]; 2]> {
    let m = field.metric(p)?;
    let det = m.det();
    if det <= SINGULAR_DET {
        return Err(Error::SingularMetric {
            x: p[0],
            y: p[1],
            det,
        });
    }
    let inv = [
        [m.g[1][1] / det, -m.g[0][1] / det],
        [-m.g[1][0] / det, m.g[0][0] / det],
    ];
    let mut out = [[[0.0; 2]; 2]; 2];
    for (k, plane) in out.iter_mut().enumerate() {
        for (i, row) in plane.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for (l, inv_kl) in inv[k].iter().enumerate() {
                    s += inv_kl * (m.dg[i][j][l] + m.dg[j][i][l] - m.dg[l][i][j]);
                }
                *entry = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// A sampled curve in the chart. `velocities` is present for geodesics.
/// `truncated` is set when integration stopped at the domain boundary
/// before reaching the requested time.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Point2>,
    pub velocities: Option<Vec<Point2>>,
    pub truncated: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn end_point(&self) -> Point2 {
        *self
            .points
            .last()
            .expect("trajectory has at least the start")
    }
}

fn check_step(step: f64) -> Result<f64> {
    if step.is_finite() && step > 0.0 {
        Ok(step)
    } else {
        Err(Error::InvalidStep(step))
    }
}

fn check_t_max(t_max: f64) -> Result<f64> {
    if t_max.is_finite() && t_max > 0.0 {
        Ok(t_max)
    } else {
        Err(Error::domain(format!(
            "integration horizon must be positive and finite, got {t_max}"
        )))
    }
}

fn inside_geodesic_domain(p: Point2) -> bool {
    p[0].is_finite() && p[1].is_finite() && p[0] > GEODESIC_MARGIN && p[1] > GEODESIC_MARGIN
}

fn inside_flow_box(p: Point2) -> bool {
    p.iter()
        .all(|&c| c.is_finite() && c > FLOW_LO && c < FLOW_HI)
}

type GeoState = (Point2, Point2);

fn geodesic_rhs<M: MetricField + ?Sized>(field: &M, s: GeoState) -> Result<GeoState> {
    let (x, v) = s;
    if !inside_geodesic_domain(x) {
        return Err(Error::domain("geodesic left the chart domain"));
    }
    let ch = christoffel(field, x)?;
    let mut a = [0.0; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                a[k] -= ch[k][i][j] * v[i] * v[j];
            }
        }
    }
    Ok((v, a))
}

fn geo_axpy(s: GeoState, h: f64, d: GeoState) -> GeoState {
    (
        [s.0[0] + h * d.0[0], s.0[1] + h * d.0[1]],
        [s.1[0] + h * d.1[0], s.1[1] + h * d.1[1]],
    )
}

/// One classical RK4 step of the geodesic equation; `None` means a stage
/// left the domain, signalling boundary truncation to the caller.
fn geodesic_rk4_step<M: MetricField + ?Sized>(field: &M, s: GeoState, h: f64) -> Option<GeoState> {
    let k1 = geodesic_rhs(field, s).ok()?;
    let k2 = geodesic_rhs(field, geo_axpy(s, 0.5 * h, k1)).ok()?;
    let k3 = geodesic_rhs(field, geo_axpy(s, 0.5 * h, k2)).ok()?;
    let k4 = geodesic_rhs(field, geo_axpy(s, h, k3)).ok()?;
    let sixth = h / 6.0;
    let mut out = s;
    for c in 0..2 {
        out.0[c] += sixth * (k1.0[c] + 2.0 * k2.0[c] + 2.0 * k3.0[c] + k4.0[c]);
        out.1[c] += sixth * (k1.1[c] + 2.0 * k2.1[c] + 2.0 * k3.1[c] + k4.1[c]);
    }
    let finite = out.0.iter().chain(out.1.iter()).all(|c| c.is_finite());
    (finite && inside_geodesic_domain(out.0)).then_some(out)
}

/// Shoots the geodesic with the given initial point and velocity, sampling
/// every `step` up to `t_max`. The metric norm of the velocity is an
/// integral of motion; the fixed-step RK4 drift over unit time at step
/// `1e-3` stays below 1e-6 for the metrics in this crate.
pub fn geodesic_shoot<M: MetricField + ?Sized>(
    field: &M,
    start: Point2,
    velocity: Point2,
    t_max: f64,
    step: f64,
) -> Result<Trajectory> {
    let step = check_step(step)?;
    let t_max = check_t_max(t_max)?;
    if !inside_geodesic_domain(start) {
        return Err(Error::domain(format!(
            "geodesic start ({}, {}) outside the open positive quadrant",
            start[0], start[1]
        )));
    }
    if !velocity.iter().all(|c| c.is_finite()) {
        return Err(Error::domain("geodesic velocity must be finite"));
    }
    // Fail fast on a bad metric at the start.
    geodesic_rhs(field, (start, velocity))?;

    let mut times = vec![0.0];
    let mut points = vec![start];
    let mut velocities = vec![velocity];
    let mut state = (start, velocity);
    let mut t = 0.0;
    let mut truncated = false;
    while t < t_max - 1e-12 * t_max {
        let h = step.min(t_max - t);
        match geodesic_rk4_step(field, state, h) {
            Some(next) => {
                state = next;
                t += h;
                times.push(t);
                points.push(state.0);
                velocities.push(state.1);
            }
            None => {
                truncated = true;
                break;
            }
        }
    }
    Ok(Trajectory {
        times,
        points,
        velocities: Some(velocities),
        truncated,
    })
}

/// Length of the sampled curve under the field's metric, using the
/// straight chord between consecutive samples and the metric at the
/// chord midpoint.
pub fn arc_length<M: MetricField + ?Sized>(field: &M, traj: &Trajectory) -> Result<f64> {
    let mut total = 0.0;
    for w in traj.points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let m = field.metric(mid)?;
        let d = [b[0] - a[0], b[1] - a[1]];
        total += m.speed(d);
    }
    Ok(total)
}

/// Integrates the steepest-ascent flow `ċ = grad(c)` with fixed-step RK4.
///
/// The gradient must be finite at the start; the flow truncates (flag set)
/// when any RK4 stage leaves `(1e-8, 1e8)²` or produces a non-finite
/// gradient.
pub fn gradient_flow<G>(grad: G, start: Point2, t_max: f64, step: f64) -> Result<Trajectory>
where
    G: Fn(Point2) -> [f64; 2],
{
    let step = check_step(step)?;
    let t_max = check_t_max(t_max)?;
    if !inside_flow_box(start) {
        return Err(Error::domain(format!(
            "flow start ({}, {}) outside the open box (1e-8, 1e8)^2",
            start[0], start[1]
        )));
    }
    let g0 = grad(start);
    if !g0.iter().all(|c| c.is_finite()) {
        return Err(Error::NonFinite {
            x: start[0],
            y: start[1],
        });
    }

    let eval = |p: Point2| -> Option<[f64; 2]> {
        if !inside_flow_box(p) {
            return None;
        }
        let g = grad(p);
        g.iter().all(|c| c.is_finite()).then_some(g)
    };
    let axpy = |p: Point2, h: f64, d: [f64; 2]| [p[0] + h * d[0], p[1] + h * d[1]];

    let mut times = vec![0.0];
    let mut points = vec![start];
    let mut p = start;
    let mut t = 0.0;
    let mut truncated = false;
    'outer: while t < t_max - 1e-12 * t_max {
        let h = step.min(t_max - t);
        let next = (|| {
            let k1 = eval(p)?;
            let k2 = eval(axpy(p, 0.5 * h, k1))?;
            let k3 = eval(axpy(p, 0.5 * h, k2))?;
            let k4 = eval(axpy(p, h, k3))?;
            let q = [
                p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            inside_flow_box(q).then_some(q)
        })();
        match next {
            Some(q) => {
                p = q;
                t += h;
                times.push(t);
                points.push(p);
            }
            None => {
                truncated = true;
                break 'outer;
            }
        }
    }
    Ok(Trajectory {
        times,
        points,
        velocities: None,
        truncated,
    })
}

/// Scalar field sampled over a Cartesian grid.
///
/// `values` is row-major over the first axis: `values[ix * y.len() + iy]`.
#[derive(Debug, Clone)]
pub struct GridField {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub x_label: String,
    pub y_label: String,
}

impl GridField {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.y.len() + iy]
    }
}

/// Evaluates `f` over the product grid `xs × ys` in row-major order.
/// A non-finite sample aborts with the offending coordinates.
pub fn grid_eval<F>(f: F, xs: &[f64], ys: &[f64], x_label: &str, y_label: &str) -> Result<GridField>
where
    F: Fn(f64, f64) -> f64,
{
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::domain("grid axes must be nonempty"));
    }
    let mut values = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            let v = f(x, y);
            if !v.is_finite() {
                return Err(Error::NonFinite { x, y });
            }
            values.push(v);
        }
    }
    Ok(GridField {
        x: xs.to_vec(),
        y: ys.to_vec(),
        values,
        x_label: x_label.to_string(),
        y_label: y_label.to_string(),
    })
}

/// `n` evenly spaced values from `lo` to `hi` inclusive (`n = 1` gives `[lo]`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect()
}
