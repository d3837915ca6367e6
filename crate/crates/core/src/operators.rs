//! Convolution with `G`, `∇G` and `ΔG`: radial quadrature in any dimension
//! and direct grid sums for `N ≤ 3`.
//!
//! For radial `f`,
//! `u(r) = w_{N-1} ∫ f(ρ) ρ^{N-1} ∫_0^π K(d) sin^{N-2}θ dθ dρ`, with
//! `d² = r² + ρ² - 2rρ cos θ`. The kernel is singular only at `d = 0`, i.e.
//! at `ρ = r`, `θ = 0`; both integrals are split and graded there.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{greens_biharmonic, kernel_asymptotic, kernel_value_smooth, Derivative, GreensParams};
use crate::grid::{fft_nd, Field, PeriodicGrid};
use crate::quadrature::{cap_width, graded_breaks, GaussLegendre};
use crate::radial::RadialFunction;
use crate::specfun::sphere_area;

/// Which operator: `T_k` (`G`), the radial component of `S^i_k` (`∇G`), or `S^Δ_k` (`ΔG`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    G,
    GradG,
    LapG,
}

impl Kernel {
    pub fn derivative(self) -> Derivative {
        match self {
            Kernel::G => Derivative::None,
            Kernel::GradG => Derivative::Grad,
            Kernel::LapG => Derivative::Lap,
        }
    }

    fn eval_direct(self, params: &GreensParams, d: f64) -> f64 {
        kernel_value_smooth(params, self.derivative(), d).expect("kernel evaluated at a positive radius")
    }
}

const CHEB_DEGREE: usize = 20;
/// Dyadic panels below the kernel length reach down to `ℓ·2^{-DYADIC_LEVELS}`.
const DYADIC_LEVELS: usize = 36;

/// Piecewise Chebyshev interpolant of a radial kernel on `[d_min, d_max]`:
/// dyadic panels below `ℓ = 1/√k`, panels of width `ℓ/2` above. Outside the
/// table the kernel is evaluated directly.
#[derive(Clone, Debug)]
pub struct KernelTable {
    params: GreensParams,
    kernel: Kernel,
    ell: f64,
    d_min: f64,
    d_max: f64,
    width: f64,
    /// The table holds `d^power · K(d)`, removing the leading singularity.
    power: i32,
    dyadic: Vec<[f64; CHEB_DEGREE + 1]>,
    uniform: Vec<[f64; CHEB_DEGREE + 1]>,
}

fn chebyshev_fit<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> [f64; CHEB_DEGREE + 1] {
    let n = CHEB_DEGREE + 1;
    let samples: Vec<f64> = (0..n)
        .map(|j| {
            let t = (PI * (j as f64 + 0.5) / n as f64).cos();
            f(0.5 * (a + b) + 0.5 * (b - a) * t)
        })
        .collect();
    let mut c = [0.0; CHEB_DEGREE + 1];
    for (i, ci) in c.iter_mut().enumerate() {
        let s: f64 = samples
            .iter()
            .enumerate()
            .map(|(j, v)| v * (PI * i as f64 * (j as f64 + 0.5) / n as f64).cos())
            .sum();
        *ci = 2.0 * s / n as f64;
    }
    c[0] *= 0.5;
    c
}

fn clenshaw(c: &[f64; CHEB_DEGREE + 1], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ci in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ci;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

impl KernelTable {
    pub fn new(params: &GreensParams, kernel: Kernel, d_max: f64) -> Self {
        let ell = params.length();
        let d_min = ell * 2f64.powi(-(DYADIC_LEVELS as i32));
        let power = match kernel_asymptotic(params, kernel.derivative()).singular_power() {
            Some(b) if b < 0.0 => (-b).round() as i32,
            _ => 0,
        };
        let smooth = |d: f64| d.powi(power) * kernel.eval_direct(params, d);
        let dyadic = (0..DYADIC_LEVELS)
            .map(|j| {
                let hi = ell * 2f64.powi(-(j as i32));
                chebyshev_fit(0.5 * hi, hi, smooth)
            })
            .collect();
        let width = 0.5 * ell;
        let d_max = d_max.max(ell);
        let count = ((d_max - ell) / width).ceil() as usize;
        let uniform = (0..count)
            .map(|i| {
                let a = ell + i as f64 * width;
                chebyshev_fit(a, a + width, smooth)
            })
            .collect();
        Self { params: *params, kernel, ell, d_min, d_max: ell + count as f64 * width, width, power, dyadic, uniform }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn eval(&self, d: f64) -> f64 {
        if d < self.d_min || d >= self.d_max {
            return self.kernel.eval_direct(&self.params, d);
        }
        if d < self.ell {
            let j = ((self.ell / d).log2().floor() as usize).min(DYADIC_LEVELS - 1);
            let hi = self.ell * 2f64.powi(-(j as i32));
            let lo = 0.5 * hi;
            // guard against floor() landing one panel off
            let (j, lo, hi) = if d < lo {
                (j + 1, 0.5 * lo, lo)
            } else if d > hi {
                (j - 1, hi, 2.0 * hi)
            } else {
                (j, lo, hi)
            };
            if j >= DYADIC_LEVELS {
                return self.kernel.eval_direct(&self.params, d);
            }
            let t = (2.0 * d - lo - hi) / (hi - lo);
            return clenshaw(&self.dyadic[j], t) / d.powi(self.power);
        }
        let i = (((d - self.ell) / self.width) as usize).min(self.uniform.len() - 1);
        let a = self.ell + i as f64 * self.width;
        let t = (2.0 * (d - a) - self.width) / self.width;
        clenshaw(&self.uniform[i], t) / d.powi(self.power)
    }
}

/// Quadrature settings for [`RadialConvolver`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub order: usize,
    /// Geometric grading toward the singular radius.
    pub grading_ratio: f64,
    pub grading_depth: usize,
    /// Panel width cap as a fraction of `min(1/√k, length scale of f)`.
    pub width_fraction: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { order: 16, grading_ratio: 0.5, grading_depth: 20, width_fraction: 0.5 }
    }
}

/// Reusable radial convolution: for an output radius `r` it produces nodes
/// `ρ_q` and weights `W_q` with `u(r) = Σ W_q f(ρ_q)`.
pub struct RadialConvolver {
    params: GreensParams,
    table: KernelTable,
    support: f64,
    max_width: f64,
    breakpoints: Vec<f64>,
    options: QuadratureOptions,
    outer: std::sync::Arc<GaussLegendre>,
    inner: std::sync::Arc<GaussLegendre>,
    sphere_lower: f64,
    sphere_full: f64,
}

impl RadialConvolver {
    /// `support`/`length_scale`/`breakpoints` describe the sources that will be integrated;
    /// `r_max` bounds the output radii.
    pub fn new(
        params: &GreensParams,
        kernel: Kernel,
        support: f64,
        length_scale: f64,
        breakpoints: Vec<f64>,
        r_max: f64,
        options: QuadratureOptions,
    ) -> Result<Self> {
        if params.n < 2 {
            return Err(Error::UnsupportedDimension(params.n));
        }
        if !(support > 0.0 && support.is_finite()) {
            return Err(Error::Domain(format!("source support must be positive and finite, got {support}")));
        }
        let table = KernelTable::new(params, kernel, r_max + support + params.length());
        let max_width = options.width_fraction * params.length().min(length_scale);
        let mut breakpoints: Vec<f64> = breakpoints.into_iter().filter(|b| *b > 0.0 && *b < support).collect();
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breakpoints.dedup();
        Ok(Self {
            params: *params,
            table,
            support,
            max_width,
            breakpoints,
            options,
            outer: GaussLegendre::cached(options.order),
            inner: GaussLegendre::cached(options.order),
            sphere_lower: sphere_area(params.n - 1),
            sphere_full: sphere_area(params.n),
        })
    }

    pub fn for_source(params: &GreensParams, kernel: Kernel, f: &dyn RadialFunction, r_max: f64) -> Result<Self> {
        Self::with_options(params, kernel, f, r_max, QuadratureOptions::default())
    }

    pub fn with_options(
        params: &GreensParams,
        kernel: Kernel,
        f: &dyn RadialFunction,
        r_max: f64,
        options: QuadratureOptions,
    ) -> Result<Self> {
        Self::new(params, kernel, f.support_radius(), f.length_scale(), f.breakpoints(), r_max, options)
    }

    pub fn kernel(&self) -> Kernel {
        self.table.kernel()
    }

    /// Breakpoints of the `ρ` integral for output radius `r`.
    fn outer_breaks(&self, r: f64) -> Vec<f64> {
        let (ratio, depth) = (self.options.grading_ratio, self.options.grading_depth);
        let big = self.support;
        let mut pts = vec![0.0, big];
        pts.extend(&self.breakpoints);
        if r == 0.0 {
            // K(ρ) singular at ρ = 0
            let first = self.max_width.min(big);
            pts.extend(graded_breaks(0.0, first, true, ratio, depth));
        } else if r < big {
            pts.push(r);
            let half = self.max_width.min(r).min(big - r);
            pts.extend(graded_breaks(r - half, r, false, ratio, depth));
            pts.extend(graded_breaks(r, r + half, true, ratio, depth));
        } else {
            // nearly singular at the support edge when r is close to it
            let gap = r - big;
            let half = self.max_width.min(big);
            let levels = ((half / gap.max(1e-300)).log2().ceil().max(0.0) as usize).min(depth);
            pts.extend(graded_breaks(big - half, big, false, ratio, levels));
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
        cap_width(&pts, self.max_width)
    }

    /// `∫_0^π K(d) sin^{N-2}θ dθ` (for `GradG`, `K = G'(d)(r - ρ cos θ)/d`).
    pub fn angular(&self, r: f64, rho: f64) -> f64 {
        let n = self.params.n;
        if r == 0.0 || rho == 0.0 {
            let ratio = self.sphere_full / self.sphere_lower;
            let d = r.max(rho);
            return match self.kernel() {
                Kernel::GradG if rho == 0.0 => ratio * self.table.eval(d),
                Kernel::GradG => 0.0,
                _ => ratio * self.table.eval(d),
            };
        }
        let gap = (r - rho).abs();
        let theta_s = (gap / (r * rho).sqrt()).min(PI);
        let mut breaks = vec![0.0];
        if theta_s > 0.0 {
            let mut t = theta_s;
            while t < PI {
                breaks.push(t);
                t *= 2.0;
            }
        } else {
            // θ = 0 singular: grade toward it
            breaks.extend(graded_breaks(0.0, PI / 8.0, true, 0.5, 40).into_iter().skip(1));
        }
        breaks.push(PI);
        breaks.dedup();
        let cap = (0.5 * self.params.length() / r.min(rho)).min(PI / 6.0);
        let breaks = cap_width(&breaks, cap);
        let rule = &self.inner;
        let sin_power = n as i32 - 2;
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
            let mut s = 0.0;
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let theta = mid + half * x;
                let sh = (0.5 * theta).sin();
                let d = ((r - rho) * (r - rho) + 4.0 * r * rho * sh * sh).sqrt();
                let jac = theta.sin().powi(sin_power);
                let k = self.table.eval(d);
                let v = match self.kernel() {
                    Kernel::GradG => k * ((r - rho) + 2.0 * rho * sh * sh) / d,
                    _ => k,
                };
                s += wt * v * jac;
            }
            total += s * half;
        }
        total
    }

    /// Nodes and weights of the `ρ` integral at output radius `r`.
    pub fn weights(&self, r: f64) -> (Vec<f64>, Vec<f64>) {
        let breaks = self.outer_breaks(r);
        let rule = &self.outer;
        let n = self.params.n as i32;
        let mut nodes = Vec::with_capacity(breaks.len() * rule.len());
        let mut weights = Vec::with_capacity(breaks.len() * rule.len());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let rho = mid + half * x;
                nodes.push(rho);
                weights.push(wt * half * self.sphere_lower * rho.powi(n - 1) * self.angular(r, rho));
            }
        }
        (nodes, weights)
    }

    /// `u(r)` and the absolute-value scale `Σ |W_q f(ρ_q)|`.
    pub fn apply_with_scale(&self, f: &dyn RadialFunction, r: f64) -> (f64, f64) {
        let (nodes, weights) = self.weights(r);
        let mut u = 0.0;
        let mut scale = 0.0;
        for (rho, w) in nodes.iter().zip(&weights) {
            let v = w * f.eval(*rho);
            u += v;
            scale += v.abs();
        }
        (u, scale)
    }

    pub fn apply(&self, f: &dyn RadialFunction, r: f64) -> f64 {
        self.apply_with_scale(f, r).0
    }
}

/// Relative tolerance of [`convolve_radial`] between two quadrature levels.
pub const RADIAL_TOLERANCE: f64 = 1e-8;

/// `T_k f`, `(S_k f)·x̂` or `S^Δ_k f` at the radii `r_eval`, for radial `f`.
///
/// Each value is computed with 16- and 24-point panel rules; if they differ
/// by more than `1e-8` of `Σ|W f|`, the panel caps are halved (up to three
/// times) before giving up with `QuadratureFailure`.
pub fn convolve_radial(
    params: &GreensParams,
    f: &dyn RadialFunction,
    r_eval: &[f64],
    kernel: Kernel,
) -> Result<Vec<f64>> {
    if params.n < 2 {
        return Err(Error::UnsupportedDimension(params.n));
    }
    if let Some(bad) = r_eval.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
        return Err(Error::Domain(format!("evaluation radius must be non-negative, got {bad}")));
    }
    let r_max = r_eval.iter().cloned().fold(0.0, f64::max);
    let mut levels = Vec::new();
    for refine in 0..4 {
        let width_fraction = 0.5 * 0.5f64.powi(refine);
        let coarse =
            QuadratureOptions { width_fraction, ..QuadratureOptions::default() };
        let fine = QuadratureOptions { order: 24, ..coarse };
        levels.push((
            RadialConvolver::with_options(params, kernel, f, r_max, coarse)?,
            RadialConvolver::with_options(params, kernel, f, r_max, fine)?,
        ));
    }
    r_eval
        .par_iter()
        .map(|&r| {
            let mut last = (0.0, 0.0);
            for (coarse, fine) in &levels {
                let (a, _) = coarse.apply_with_scale(f, r);
                let (b, scale) = fine.apply_with_scale(f, r);
                if (a - b).abs() <= RADIAL_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
                    return Ok(b);
                }
                last = (a, b);
            }
            Err(Error::QuadratureFailure(format!(
                "radius {r}: quadrature levels disagree ({} vs {})",
                last.0, last.1
            )))
        })
        .collect()
}

/// `f(y) ↦ κ^{-4} f(y/κ)`, so that `T_{κ²} f(x) = T_1 f̃(κx)`.
pub struct ScaledSource<'a> {
    pub inner: &'a dyn RadialFunction,
    pub kappa: f64,
}

impl RadialFunction for ScaledSource<'_> {
    fn eval(&self, r: f64) -> f64 {
        self.kappa.powi(-4) * self.inner.eval(r / self.kappa)
    }

    fn support_radius(&self) -> f64 {
        self.kappa * self.inner.support_radius()
    }

    fn length_scale(&self) -> f64 {
        self.kappa * self.inner.length_scale()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().into_iter().map(|b| b * self.kappa).collect()
    }
}

/// Finite-difference check of `∂_r T f = (S f)·x̂` and `Δ T f = S^Δ f` at radius `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub r: f64,
    pub u: f64,
    pub grad_fd: f64,
    pub grad_kernel: f64,
    pub lap_fd: f64,
    pub lap_kernel: f64,
    pub grad_discrepancy: f64,
    pub lap_discrepancy: f64,
    pub tolerance: f64,
}

impl DerivativeReport {
    pub fn passed(&self) -> bool {
        self.grad_discrepancy < self.tolerance && self.lap_discrepancy < self.tolerance
    }
}

/// Compares difference quotients of `T_k f` with the `∇G`/`ΔG` convolutions at `x`.
/// The gradient is compared along `x/|x|`; discrepancies are relative to
/// `max(|value|, |u|/r)` for the gradient and `max(|value|, |u|/r²)` for the Laplacian.
pub fn derivative_identity_check(params: &GreensParams, f: &dyn RadialFunction, x: &[f64]) -> Result<DerivativeReport> {
    if x.len() != params.n {
        return Err(Error::Shape(format!("point has {} coordinates, dimension is {}", x.len(), params.n)));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(r > 0.0) {
        return Err(Error::Domain("derivative check needs a point away from the origin".into()));
    }
    let h = 0.01 * r.min(params.length()).min(f.length_scale());
    let stencil: Vec<f64> = (-3..=3).map(|j| r + j as f64 * h).collect();
    let u = convolve_radial(params, f, &stencil, Kernel::G)?;
    let grad_fd = (-u[0] + 9.0 * u[1] - 45.0 * u[2] + 45.0 * u[4] - 9.0 * u[5] + u[6]) / (60.0 * h);
    let d2 = (2.0 * u[0] - 27.0 * u[1] + 270.0 * u[2] - 490.0 * u[3] + 270.0 * u[4] - 27.0 * u[5] + 2.0 * u[6])
        / (180.0 * h * h);
    let lap_fd = d2 + (params.n as f64 - 1.0) / r * grad_fd;
    let grad_kernel = convolve_radial(params, f, &[r], Kernel::GradG)?[0];
    let lap_kernel = convolve_radial(params, f, &[r], Kernel::LapG)?[0];
    let u0 = u[3];
    let discrepancy = |a: f64, b: f64, floor: f64| (a - b).abs() / b.abs().max(floor).max(f64::MIN_POSITIVE);
    Ok(DerivativeReport {
        r,
        u: u0,
        grad_fd,
        grad_kernel,
        lap_fd,
        lap_kernel,
        grad_discrepancy: if grad_kernel == 0.0 && grad_fd.abs() < 1e-300 {
            0.0
        } else {
            discrepancy(grad_fd, grad_kernel, u0.abs() / r)
        },
        lap_discrepancy: if lap_kernel == 0.0 && lap_fd.abs() < 1e-300 {
            0.0
        } else {
            discrepancy(lap_fd, lap_kernel, u0.abs() / (r * r))
        },
        tolerance: 1e-4,
    })
}

/// Sup of `|f|` outside `[-L/2, L/2]^N` allowed by [`apply_t_grid`].
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

/// `u(x_i) = Σ_j f(x_j) G(|x_i - x_j|) h^N` on the grid points, the
/// singular self-cell taking `G(0) h^N` (G is bounded for `N ≤ 3`).
///
/// The sum is a linear (non-periodic) discrete convolution, evaluated by
/// zero-padded FFT; this only reorders the sum.
pub fn apply_t_grid(params: &GreensParams, f: &Field) -> Result<Field> {
    let grid = f.grid;
    if grid.dim != params.n {
        return Err(Error::Shape(format!("grid dimension {} but kernel dimension {}", grid.dim, params.n)));
    }
    if grid.dim > 3 {
        return Err(Error::UnsupportedDimension(grid.dim));
    }
    for (i, v) in f.data.iter().enumerate() {
        let p = grid.point(i);
        if p.iter().any(|c| c.abs() > 0.5 * grid.halfwidth) && v.abs() > SUPPORT_TOLERANCE {
            return Err(Error::SupportViolation(format!(
                "|f| = {:.3e} at {:?}, outside the central half of the box",
                v.abs(),
                p
            )));
        }
    }
    let m = grid.points;
    let big = PeriodicGrid::new(grid.dim, 2.0 * grid.halfwidth, 2 * m)?;
    let h = grid.spacing();
    let cell = grid.cell_volume();
    let center = crate::greens::small_r_asymptotic(params).eval(0.0);
    // kernel on the difference grid, wrapped into FFT order
    let mut kernel = vec![Complex64::new(0.0, 0.0); big.len()];
    let mut source = vec![Complex64::new(0.0, 0.0); big.len()];
    let wrap = |j: usize| if j < m { j as f64 } else { j as f64 - 2.0 * m as f64 };
    for (flat, slot) in kernel.iter_mut().enumerate() {
        let idx = big.unravel(flat);
        let d2: f64 = (0..grid.dim).map(|a| (wrap(idx[a]) * h).powi(2)).sum();
        let v = if d2 == 0.0 { center } else { greens_biharmonic(params, d2.sqrt())? };
        *slot = Complex64::new(v * cell, 0.0);
    }
    for (flat, v) in f.data.iter().enumerate() {
        let idx = grid.unravel(flat);
        let mut bflat = 0;
        for &i in idx.iter().take(grid.dim) {
            bflat = bflat * 2 * m + i;
        }
        source[bflat] = Complex64::new(*v, 0.0);
    }
    fft_nd(&big, &mut kernel, false);
    fft_nd(&big, &mut source, false);
    for (s, k) in source.iter_mut().zip(&kernel) {
        *s *= k;
    }
    fft_nd(&big, &mut source, true);
    let mut out = Field::zeros(grid);
    for (flat, v) in out.data.iter_mut().enumerate() {
        let idx = grid.unravel(flat);
        let mut bflat = 0;
        for &i in idx.iter().take(grid.dim) {
            bflat = bflat * 2 * m + i;
        }
        *v = source[bflat].re;
    }
    Ok(out)
}

/// Discrete radial `L^p` norm `(w_N ∫ |u|^p r^{N-1} dr)^{1/p}` from samples on increasing radii
/// (trapezoid rule); `p = ∞` gives the max.
pub fn radial_lp_norm(n: usize, radii: &[f64], values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let wn = sphere_area(n);
    let mut s = 0.0;
    for i in 1..radii.len() {
        let f = |j: usize| values[j].abs().powf(p) * radii[j].powi(n as i32 - 1);
        s += 0.5 * (radii[i] - radii[i - 1]) * (f(i) + f(i - 1));
    }
    (wn * s).powf(1.0 / p)
}

/// `‖T_k f_λ‖_s / ‖f_λ‖_p` for dilations `f_λ(r) = f(r/λ)` of a source;
/// one row per scale, one column per `s`.
pub fn boundedness_probe(
    params: &GreensParams,
    f: &dyn RadialFunction,
    p: f64,
    s_values: &[f64],
    scales: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::with_capacity(scales.len());
    for &lambda in scales {
        let dilated = Dilated { inner: f, lambda };
        let support = dilated.support_radius();
        let outer = support + 30.0 * params.length();
        // dense near the source, coarser in the exponentially decaying tail
        let near = 1.5 * support;
        let mut radii: Vec<f64> = (0..=120).map(|i| near * (i as f64 / 120.0).powi(2)).collect();
        radii.extend((1..=120).map(|i| near + (outer - near) * i as f64 / 120.0));
        let conv = RadialConvolver::for_source(params, Kernel::G, &dilated, outer)?;
        let u: Vec<f64> = radii.par_iter().map(|&r| conv.apply(&dilated, r)).collect();
        let fine: Vec<f64> = (0..=4000).map(|i| support * i as f64 / 4000.0).collect();
        let fine_vals: Vec<f64> = fine.iter().map(|&r| dilated.eval(r)).collect();
        let den = radial_lp_norm(params.n, &fine, &fine_vals, p);
        rows.push(s_values.iter().map(|&s| radial_lp_norm(params.n, &radii, &u, s) / den).collect());
    }
    Ok(rows)
}

struct Dilated<'a> {
    inner: &'a dyn RadialFunction,
    lambda: f64,
}

impl RadialFunction for Dilated<'_> {
    fn eval(&self, r: f64) -> f64 {
        self.inner.eval(r / self.lambda)
    }

    fn support_radius(&self) -> f64 {
        self.lambda * self.inner.support_radius()
    }

    fn length_scale(&self) -> f64 {
        self.lambda * self.inner.length_scale()
    }
}
