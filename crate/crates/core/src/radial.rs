//! Radial functions on `[0, ∞)`: analytic families and sampled profiles.

use crate::error::{Error, Result};

/// A radial function `f(|x|)` with bounded support.
pub trait RadialFunction: Sync {
    fn eval(&self, r: f64) -> f64;

    /// Beyond this radius the function is treated as zero.
    fn support_radius(&self) -> f64;

    /// Length over which the function varies appreciably. Quadrature panels
    /// are no wider than a fraction of this.
    fn length_scale(&self) -> f64 {
        self.support_radius() / 8.0
    }

    /// Radii where the function is less smooth (spline knots); quadrature
    /// panels break there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `amplitude · exp(-(r/width)²)`, truncated where it drops below `1e-17` of its peak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gaussian {
    pub amplitude: f64,
    pub width: f64,
}

impl Gaussian {
    pub fn new(amplitude: f64, width: f64) -> Self {
        Self { amplitude, width }
    }

    pub fn unit() -> Self {
        Self::new(1.0, 1.0)
    }
}

impl RadialFunction for Gaussian {
    fn eval(&self, r: f64) -> f64 {
        let t = r / self.width;
        self.amplitude * (-t * t).exp()
    }

    fn support_radius(&self) -> f64 {
        // e^{-39.1} ≈ 1e-17
        self.width * 39.2f64.sqrt()
    }

    fn length_scale(&self) -> f64 {
        self.width
    }
}

/// Smooth compactly supported bump `amplitude · exp(1 - 1/(1 - (r/radius)²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub radius: f64,
}

impl RadialFunction for Bump {
    fn eval(&self, r: f64) -> f64 {
        let t = r / self.radius;
        if t >= 1.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn length_scale(&self) -> f64 {
        self.radius / 4.0
    }
}

/// Closure-backed radial function.
pub struct FnRadial<F> {
    pub f: F,
    pub support: f64,
    pub scale: f64,
}

impl<F: Fn(f64) -> f64 + Sync> FnRadial<F> {
    pub fn new(f: F, support: f64, scale: f64) -> Self {
        Self { f, support, scale }
    }
}

impl<F: Fn(f64) -> f64 + Sync> RadialFunction for FnRadial<F> {
    fn eval(&self, r: f64) -> f64 {
        if r > self.support {
            0.0
        } else {
            (self.f)(r)
        }
    }

    fn support_radius(&self) -> f64 {
        self.support
    }

    fn length_scale(&self) -> f64 {
        self.scale
    }
}

/// Sampled radial function with cubic-spline interpolation.
///
/// When the first node is `r = 0` the spline is clamped with zero slope
/// there (even extension); otherwise both ends are natural. Below the first
/// node the first value is held; beyond the last node the profile is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the nodes.
    curvature: Vec<f64>,
    support_radius: f64,
}

impl RadialProfile {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let support = nodes.last().copied().unwrap_or(0.0);
        Self::with_support(nodes, values, support)
    }

    pub fn with_support(nodes: Vec<f64>, values: Vec<f64>, support_radius: f64) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Shape(format!("{} nodes but {} values", nodes.len(), values.len())));
        }
        if nodes.len() < 2 {
            return Err(Error::Shape("a radial profile needs at least two nodes".into()));
        }
        if nodes[0] < 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("profile nodes must be non-negative and strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("profile values must be finite".into()));
        }
        let last = *nodes.last().unwrap();
        if support_radius < last {
            return Err(Error::Domain(format!("support radius {support_radius} below last node {last}")));
        }
        let curvature = spline_curvature(&nodes, &values, nodes[0] == 0.0);
        Ok(Self { nodes, values, curvature, support_radius })
    }

    /// Sample `f` at `nodes`.
    pub fn sample<F: Fn(f64) -> f64>(nodes: Vec<f64>, f: F) -> Result<Self> {
        let values = nodes.iter().map(|&r| f(r)).collect();
        Self::new(nodes, values)
    }

    /// `count` log-spaced nodes on `[r_min, r_max]`.
    pub fn log_nodes(r_min: f64, r_max: f64, count: usize) -> Vec<f64> {
        let ratio = (r_max / r_min).ln();
        let mut nodes: Vec<f64> = (0..count).map(|i| r_min * (ratio * i as f64 / (count - 1) as f64).exp()).collect();
        if let Some(last) = nodes.last_mut() {
            *last = r_max;
        }
        nodes
    }

    /// `count` uniform nodes on `[0, r_max]`.
    pub fn uniform_nodes(r_max: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| r_max * i as f64 / (count - 1) as f64).collect()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn locate(&self, r: f64) -> usize {
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.nodes.len() - 2),
        }
    }

    /// `(f, f', f'')` of the spline at `r` (zero outside the sampled range,
    /// constant below the first node).
    pub fn eval_with_derivatives(&self, r: f64) -> (f64, f64, f64) {
        let last = *self.nodes.last().unwrap();
        if r > last {
            return (0.0, 0.0, 0.0);
        }
        if r < self.nodes[0] {
            return (self.values[0], 0.0, 0.0);
        }
        let i = self.locate(r);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let a = (x1 - r) / h;
        let b = (r - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let f = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let df = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2f = a * m0 + b * m1;
        (f, df, d2f)
    }
}

impl RadialFunction for RadialProfile {
    fn eval(&self, r: f64) -> f64 {
        self.eval_with_derivatives(r).0
    }

    fn support_radius(&self) -> f64 {
        self.support_radius
    }

    fn length_scale(&self) -> f64 {
        let n = self.nodes.len();
        let span = self.nodes[n - 1] - self.nodes[0];
        (span / 8.0).max(4.0 * span / n as f64)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.nodes.clone()
    }
}

/// Cardinal functions of the [`RadialProfile`] spline on fixed nodes: the
/// profile through values `y` evaluates to `Σ_j B_j(r) y_j`.
#[derive(Clone, Debug)]
pub struct SplineBasis {
    nodes: Vec<f64>,
    /// `curvature[i][j] = ∂m_i/∂y_j`.
    curvature: Vec<Vec<f64>>,
}

impl SplineBasis {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        let n = nodes.len();
        RadialProfile::new(nodes.clone(), vec![0.0; n])?;
        let clamped = nodes[0] == 0.0;
        let mut curvature = vec![vec![0.0; n]; n];
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            for (i, m) in spline_curvature(&nodes, &unit, clamped).into_iter().enumerate() {
                curvature[i][j] = m;
            }
            unit[j] = 0.0;
        }
        Ok(Self { nodes, curvature })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `Σ_q w_q B_j(r_q)` for every `j`.
    pub fn weighted_sum(&self, points: &[f64], weights: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        let last = self.nodes[n - 1];
        let mut direct = vec![0.0; n];
        let mut curv = vec![0.0; n];
        for (&r, &w) in points.iter().zip(weights) {
            if r > last {
                continue;
            }
            if r < self.nodes[0] {
                direct[0] += w;
                continue;
            }
            let i = match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
                Ok(i) => i.min(n - 2),
                Err(i) => i.saturating_sub(1).min(n - 2),
            };
            let h = self.nodes[i + 1] - self.nodes[i];
            let a = (self.nodes[i + 1] - r) / h;
            let b = (r - self.nodes[i]) / h;
            direct[i] += w * a;
            direct[i + 1] += w * b;
            curv[i] += w * (a * a * a - a) * h * h / 6.0;
            curv[i + 1] += w * (b * b * b - b) * h * h / 6.0;
        }
        for (i, c) in curv.iter().enumerate() {
            if *c != 0.0 {
                for (d, m) in direct.iter_mut().zip(&self.curvature[i]) {
                    *d += c * m;
                }
            }
        }
        direct
    }
}

/// Second derivatives of the interpolating cubic spline (tridiagonal solve).
fn spline_curvature(x: &[f64], y: &[f64], clamped_flat_left: bool) -> Vec<f64> {
    let n = x.len();
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut lower = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    if clamped_flat_left {
        let h = x[1] - x[0];
        diag[0] = h / 3.0;
        upper[0] = h / 6.0;
        rhs[0] = (y[1] - y[0]) / h;
    } else {
        diag[0] = 1.0;
    }
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        lower[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    diag[n - 1] = 1.0;
    // Thomas algorithm
    for i in 1..n {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}
