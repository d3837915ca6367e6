//! Semilinear problem `Δ²u + a(x)u = g(x,u)` with radial data: hypothesis
//! checks, a relaxed Picard solver for `u = T_k[(k² − a)u + g(·,u)]` and a
//! regularity report.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{is_subcritical, rational_to_f64, Rational};
use crate::greens::GreensParams;
use crate::grid::{apply_radial_symbol, to_complex, Field, PeriodicGrid};
use crate::operators::{radial_lp_norm, Kernel, QuadratureOptions, RadialConvolver};
use crate::radial::{RadialFunction, RadialProfile, SplineBasis};
use crate::spectral::solve_biharmonic_periodic;

/// Radius beyond which `e^{-r²}` envelopes are below `1e-17`.
const ENVELOPE_RADIUS: f64 = 7.0;

/// Iterates with max-norm above this are reported as [`Error::BlowUp`].
pub const BLOW_UP_NORM: f64 = 1e6;

/// `Δ² e^{-r²}` in `N` dimensions.
pub fn bilaplacian_gaussian(n: usize, r: f64) -> f64 {
    let (nf, r2) = (n as f64, r * r);
    (16.0 * r2 * r2 - (16.0 * nf + 32.0) * r2 + 4.0 * nf * nf + 8.0 * nf) * (-r2).exp()
}

/// `Δ e^{-r²}` in `N` dimensions.
pub fn laplacian_gaussian(n: usize, r: f64) -> f64 {
    (4.0 * r * r - 2.0 * n as f64) * (-r * r).exp()
}

/// The coefficient `a(x)`.
#[derive(Clone, Debug)]
pub enum Coefficient {
    /// `a ≡ value`.
    Constant(f64),
    /// `a(r) = k² − depth·e^{−(r/width)²}`.
    GaussianWell { depth: f64, width: f64 },
    /// Sampled `k² − a(r)`.
    SampledDeficit(RadialProfile),
}

impl Coefficient {
    /// `k² − a(r)`.
    pub fn deficit(&self, k: f64, r: f64) -> f64 {
        match self {
            Coefficient::Constant(v) => k * k - v,
            Coefficient::GaussianWell { depth, width } => depth * (-(r / width).powi(2)).exp(),
            Coefficient::SampledDeficit(p) => p.eval(r),
        }
    }

    /// Radius beyond which `k² − a` vanishes, if it does.
    fn support(&self, k: f64) -> Option<f64> {
        match self {
            Coefficient::Constant(v) if *v == k * k => Some(0.0),
            Coefficient::Constant(_) => None,
            Coefficient::GaussianWell { width, .. } => Some(ENVELOPE_RADIUS * width.abs()),
            Coefficient::SampledDeficit(p) => Some(p.support_radius()),
        }
    }
}

/// The nonlinearity `g(x,u)`; `σ` comes from the problem.
#[derive(Clone, Debug)]
pub enum Nonlinearity {
    /// `ε|u|^σ u e^{−r²}`.
    Power { eps: f64 },
    /// `Δ²u* + a u*` for `u* = e^{−r²}`, independent of `u`.
    Manufactured,
    /// `ε|u|^σ u e^{−r²} + Δ²u* + a u*`.
    ForcedPower { eps: f64 },
    /// Sampled forcing, independent of `u`.
    SampledForcing(RadialProfile),
}

#[derive(Clone, Debug)]
pub struct NonlinearProblem {
    pub params: GreensParams,
    pub a: Coefficient,
    pub g: Nonlinearity,
    pub b1_sup: f64,
    pub b2_sup: f64,
    pub delta: Rational,
    pub sigma: Rational,
    sigma_value: f64,
}

impl NonlinearProblem {
    pub fn new(
        params: GreensParams,
        a: Coefficient,
        g: Nonlinearity,
        delta: Rational,
        sigma: Rational,
        b1_sup: f64,
        b2_sup: f64,
    ) -> Result<Self> {
        if !(b1_sup >= 0.0 && b2_sup >= 0.0 && b1_sup.is_finite() && b2_sup.is_finite()) {
            return Err(Error::Domain(format!("bounds must be finite and ≥ 0, got {b1_sup}, {b2_sup}")));
        }
        let sigma_value = rational_to_f64(&sigma);
        Ok(Self { params, a, g, b1_sup, b2_sup, delta, sigma, sigma_value })
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> f64 {
        self.params.k
    }

    pub fn a(&self, r: f64) -> f64 {
        self.k() * self.k() - self.a.deficit(self.k(), r)
    }

    fn forcing(&self, r: f64) -> f64 {
        bilaplacian_gaussian(self.n(), r) + self.a(r) * (-r * r).exp()
    }

    fn power(&self, eps: f64, r: f64, u: f64) -> f64 {
        eps * u.abs().powf(self.sigma_value) * u * (-r * r).exp()
    }

    pub fn g(&self, r: f64, u: f64) -> f64 {
        match &self.g {
            Nonlinearity::Power { eps } => self.power(*eps, r, u),
            Nonlinearity::Manufactured => self.forcing(r),
            Nonlinearity::ForcedPower { eps } => self.power(*eps, r, u) + self.forcing(r),
            Nonlinearity::SampledForcing(p) => p.eval(r),
        }
    }

    /// `(k² − a)u + g(r,u)`, the right-hand side of the linear problem.
    pub fn source(&self, r: f64, u: f64) -> f64 {
        self.a.deficit(self.k(), r) * u + self.g(r, u)
    }

    /// Radius beyond which the source vanishes for every `u`.
    pub fn source_support(&self) -> Result<f64> {
        let a = self.a.support(self.k()).ok_or_else(|| {
            Error::HypothesisViolated("k² − a does not decay; the source has unbounded support".into())
        })?;
        let g = match &self.g {
            Nonlinearity::SampledForcing(p) => p.support_radius(),
            _ => ENVELOPE_RADIUS,
        };
        Ok(a.max(g).max(ENVELOPE_RADIUS))
    }
}

/// Points at which [`check_hypotheses`] samples the data.
#[derive(Clone, Debug)]
pub struct HypothesisSamples {
    pub radii: Vec<f64>,
    /// `u` is sampled on `[−u_max, u_max]`.
    pub u_max: f64,
    pub u_count: usize,
}

impl Default for HypothesisSamples {
    fn default() -> Self {
        Self { radii: RadialProfile::uniform_nodes(10.0, 201), u_max: 2.0, u_count: 81 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    /// Discrete `‖k² − a‖_2` and `‖k² − a‖_∞` over the sampled radii.
    pub deficit_l2: f64,
    pub deficit_linf: f64,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sampled check of the structural hypotheses; failures are report entries.
pub fn check_hypotheses(prob: &NonlinearProblem, samples: &HypothesisSamples) -> HypothesisReport {
    let mut checks = Vec::new();
    let zero = Rational::from_integer(0.into());
    let ordered = prob.sigma > prob.delta && prob.delta > zero;
    checks.push(HypothesisCheck {
        name: "exponents",
        passed: ordered,
        detail: format!("σ = {}, δ = {}", prob.sigma, prob.delta),
    });
    let n = prob.n();
    let sub = is_subcritical(n, &prob.sigma);
    checks.push(HypothesisCheck {
        name: "subcritical",
        passed: sub,
        detail: if n >= 5 {
            format!("σ + 1 = {} vs (N+4)/(N−4) = {}", &prob.sigma + Rational::from_integer(1.into()), Rational::new(((n + 4) as i64).into(), ((n - 4) as i64).into()))
        } else {
            format!("no restriction for N = {n}")
        },
    });

    let count = samples.u_count.max(2);
    let us: Vec<f64> = (0..count).map(|i| -samples.u_max + 2.0 * samples.u_max * i as f64 / (count - 1) as f64).collect();
    let delta = rational_to_f64(&prob.delta);
    let mut local_sup = 0.0f64;
    let mut worst = (0.0f64, 0.0, 0.0);
    for &r in &samples.radii {
        for &u in &us {
            let g = prob.g(r, u).abs();
            local_sup = local_sup.max(g);
            let bound = prob.b1_sup * u.abs().powf(delta + 1.0) + prob.b2_sup * u.abs().powf(prob.sigma_value + 1.0);
            let excess = g - bound * (1.0 + 1e-12);
            if excess > worst.0 {
                worst = (excess, r, u);
            }
        }
    }
    checks.push(HypothesisCheck {
        name: "local bound",
        passed: local_sup.is_finite(),
        detail: format!("sup |g| = {local_sup:.6e} over |u| ≤ {} (two-sided sampling)", samples.u_max),
    });
    checks.push(HypothesisCheck {
        name: "growth bound",
        passed: worst.0 <= 0.0,
        detail: if worst.0 > 0.0 {
            format!("|g| exceeds b1|u|^(δ+1) + b2|u|^(σ+1) by {:.3e} at r = {}, u = {}", worst.0, worst.1, worst.2)
        } else {
            format!("b1 = {}, b2 = {}", prob.b1_sup, prob.b2_sup)
        },
    });

    let deficit: Vec<f64> = samples.radii.iter().map(|&r| prob.a.deficit(prob.k(), r)).collect();
    let deficit_l2 = radial_lp_norm(n, &samples.radii, &deficit, 2.0);
    let deficit_linf = radial_lp_norm(n, &samples.radii, &deficit, f64::INFINITY);
    let tail = deficit.last().map_or(0.0, |v| v.abs());
    let decays = deficit_l2.is_finite() && tail <= 1e-8 * deficit_linf.max(f64::MIN_POSITIVE);
    checks.push(HypothesisCheck {
        name: "coefficient decay",
        passed: decays || deficit_linf == 0.0,
        detail: format!("‖k² − a‖_2 = {deficit_l2:.6e}, ‖k² − a‖_∞ = {deficit_linf:.6e}, |k² − a| at r = {} is {tail:.3e}", samples.radii.last().copied().unwrap_or(0.0)),
    });
    HypothesisReport { checks, deficit_l2, deficit_linf }
}

/// Linear solver used inside the Picard iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discretization {
    /// Radial quadrature of the kernel against a spline of the source.
    Radial,
    /// Periodic FFT solve, `N ≤ 3`.
    Spectral,
    /// Second-order finite differences for the radial ODE, any `N`.
    FiniteDifference,
}

#[derive(Clone, Debug)]
pub struct PicardOptions {
    pub omega: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub method: Discretization,
    /// Node spacing for radial quadrature, in units of `1/√k`.
    pub radial_spacing: f64,
    /// Grid for the spectral method; [`PeriodicGrid::default_for`] if absent.
    pub grid: Option<PeriodicGrid>,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { omega: 0.5, tol: 1e-8, max_iter: 500, method: Discretization::Radial, radial_spacing: 0.05, grid: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveTrace {
    /// Max-norm of successive differences, one per iteration.
    pub iterates: Vec<f64>,
    pub converged: bool,
    pub relaxation: f64,
}

/// Picard failure with the trace up to the point of failure.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct PicardFailure {
    pub error: Error,
    pub trace: SolveTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialSolution {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub u: Vec<f64>,
    pub lap: Vec<f64>,
}

impl RadialSolution {
    /// Profile with `Δu` from the spline through `values`.
    pub fn from_values(n: usize, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let profile = RadialProfile::new(nodes.clone(), values.clone())?;
        let lap = radial_laplacian(n, &profile, &nodes);
        Ok(Self { n, nodes, u: values, lap })
    }

    pub fn profile(&self) -> Result<RadialProfile> {
        RadialProfile::new(self.nodes.clone(), self.u.clone())
    }
}

fn radial_laplacian(n: usize, p: &RadialProfile, radii: &[f64]) -> Vec<f64> {
    radii
        .iter()
        .map(|&r| {
            let (_, d1, d2) = p.eval_with_derivatives(r);
            if r == 0.0 {
                n as f64 * d2
            } else {
                d2 + (n as f64 - 1.0) / r * d1
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Radial(RadialSolution),
    Grid(Field),
}

impl Solution {
    /// `u` along the first axis at `r` (spline for radial output, nearest
    /// node otherwise).
    pub fn value_at(&self, r: f64) -> Result<f64> {
        match self {
            Solution::Radial(s) => Ok(s.profile()?.eval(r)),
            Solution::Grid(f) => {
                let g = f.grid;
                let i = ((r + g.halfwidth) / g.spacing()).round() as usize;
                if i >= g.points {
                    return Err(Error::Domain(format!("r = {r} outside the box")));
                }
                let c = g.points / 2;
                let mut flat = i;
                for _ in 1..g.dim {
                    flat = flat * g.points + c;
                }
                Ok(f.data[flat])
            }
        }
    }
}

impl Solution {
    /// `(u, Δu)` at the radii: splines for radial output; for gridded output
    /// the radii must be grid points on the first axis and `Δu` is spectral.
    pub fn sample(&self, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
        match self {
            Solution::Radial(s) => {
                let u = s.profile()?;
                let lap = RadialProfile::new(s.nodes.clone(), s.lap.clone())?;
                Ok(radii.iter().map(|&r| (u.eval(r), lap.eval(r))).collect())
            }
            Solution::Grid(f) => {
                let g = f.grid;
                let lap: Vec<f64> = apply_radial_symbol(&to_complex(f), &g, |xi2| Complex64::new(-xi2, 0.0)).into_iter().map(|v| v.re).collect();
                let c = g.points / 2;
                radii
                    .iter()
                    .map(|&r| {
                        let pos = (r + g.halfwidth) / g.spacing();
                        let i = pos.round();
                        if (pos - i).abs() > 1e-9 || i < 0.0 || i as usize >= g.points {
                            return Err(Error::Domain(format!("r = {r} is not a grid point on the first axis")));
                        }
                        let mut flat = i as usize;
                        for _ in 1..g.dim {
                            flat = flat * g.points + c;
                        }
                        Ok((f.data[flat], lap[flat]))
                    })
                    .collect()
            }
        }
    }
}

/// Relaxed fixed-point loop on a sampled state.
fn iterate<F>(mut u: Vec<f64>, opts: &PicardOptions, mut map: F) -> std::result::Result<(Vec<f64>, SolveTrace), PicardFailure>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut trace = SolveTrace { iterates: Vec::new(), converged: false, relaxation: opts.omega };
    let omega = opts.omega;
    for iteration in 1..=opts.max_iter {
        let image = map(&u).map_err(|error| PicardFailure { error, trace: trace.clone() })?;
        let mut diff = 0.0f64;
        let mut norm = 0.0f64;
        for (v, w) in u.iter_mut().zip(&image) {
            let next = (1.0 - omega) * *v + omega * w;
            diff = diff.max((next - *v).abs());
            norm = norm.max(next.abs());
            *v = next;
        }
        if !norm.is_finite() || norm > BLOW_UP_NORM {
            trace.iterates.push(diff);
            return Err(PicardFailure { error: Error::BlowUp { iteration, norm }, trace });
        }
        trace.iterates.push(diff);
        if diff < opts.tol {
            trace.converged = true;
            return Ok((u, trace));
        }
    }
    let last = trace.iterates.last().copied().unwrap_or(f64::NAN);
    Err(PicardFailure { error: Error::MaxIterExceeded { iterations: opts.max_iter, last }, trace })
}

fn check_options(opts: &PicardOptions) -> Result<()> {
    if !(opts.omega > 0.0 && opts.omega <= 1.0) {
        return Err(Error::Domain(format!("relaxation must lie in (0, 1], got {}", opts.omega)));
    }
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::Domain("tolerance and iteration cap must be positive".into()));
    }
    Ok(())
}

/// Picard iteration `u ← (1−ω)u + ω T_k[(k² − a)u + g(·,u)]` from a radial
/// initial guess.
///
/// The returned solution is the image `T_k[(k² − a)u + g(·,u)]` of the last
/// iterate, so it lies in the range of the linear solver.
/// Divergence is a legitimate outcome: it is returned as
/// [`Error::MaxIterExceeded`] or [`Error::BlowUp`] together with the trace.
pub fn picard_solve(
    prob: &NonlinearProblem,
    u0: &dyn RadialFunction,
    opts: &PicardOptions,
) -> std::result::Result<(Solution, SolveTrace), PicardFailure> {
    let setup = |error| PicardFailure {
        error,
        trace: SolveTrace { iterates: Vec::new(), converged: false, relaxation: opts.omega },
    };
    check_options(opts).map_err(setup)?;
    match opts.method {
        Discretization::Radial => picard_radial(prob, u0, opts),
        Discretization::FiniteDifference => picard_fd(prob, u0, opts),
        Discretization::Spectral => {
            let grid = match opts.grid {
                Some(g) => g,
                None => PeriodicGrid::default_for(prob.n(), prob.k()).map_err(setup)?,
            };
            if grid.dim != prob.n() {
                return Err(setup(Error::Shape(format!("grid dimension {} for N = {}", grid.dim, prob.n()))));
            }
            let field = Field::from_radial(grid, |r| u0.eval(r));
            picard_solve_field(prob, &field, opts)
        }
    }
}

/// Spectral Picard iteration from a gridded initial guess.
pub fn picard_solve_field(
    prob: &NonlinearProblem,
    u0: &Field,
    opts: &PicardOptions,
) -> std::result::Result<(Solution, SolveTrace), PicardFailure> {
    let grid = u0.grid;
    let setup = |error| PicardFailure {
        error,
        trace: SolveTrace { iterates: Vec::new(), converged: false, relaxation: opts.omega },
    };
    check_options(opts).map_err(setup)?;
    if grid.dim != prob.n() {
        return Err(setup(Error::UnsupportedDimension(prob.n())));
    }
    let radii: Vec<f64> = (0..grid.len()).map(|i| grid.point(i).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let k = prob.k();
    let map = |u: &[f64]| -> Result<Vec<f64>> {
        let s = Field { grid, data: radii.iter().zip(u).map(|(&r, &v)| prob.source(r, v)).collect() };
        Ok(solve_biharmonic_periodic(&grid, &s, k)?.data)
    };
    let (u, trace) = iterate(u0.data.clone(), opts, map)?;
    let image = map(&u).map_err(|error| PicardFailure { error, trace: trace.clone() })?;
    Ok((Solution::Grid(Field { grid, data: image }), trace))
}

/// Dense matrices `u(r_i) = Σ_j T_ij s_j` (and the same for `Δu`) for
/// sources given by their spline samples `s_j`.
struct RadialOperator {
    source_nodes: Vec<f64>,
    output_nodes: Vec<f64>,
    t: Vec<Vec<f64>>,
    lap: Vec<Vec<f64>>,
}

impl RadialOperator {
    fn new(params: &GreensParams, support: f64, spacing: f64, output_radius: f64) -> Result<Self> {
        let count = (support / spacing).ceil() as usize;
        let h = support / count as f64;
        let source_nodes: Vec<f64> = (0..=count).map(|i| i as f64 * h).collect();
        // coarser output beyond the source
        let tail = 5.0 * h;
        let extra = ((output_radius - support) / tail).ceil().max(0.0) as usize;
        let mut output_nodes = source_nodes.clone();
        output_nodes.extend((1..=extra).map(|i| support + i as f64 * tail));
        let r_max = *output_nodes.last().unwrap();
        let basis = SplineBasis::new(source_nodes.clone())?;
        let build = |kernel| -> Result<Vec<Vec<f64>>> {
            let conv = RadialConvolver::new(params, kernel, support, 0.5 * params.length(), Vec::new(), r_max, QuadratureOptions::default())?;
            Ok(output_nodes
                .par_iter()
                .map(|&r| {
                    let (pts, wts) = conv.weights(r);
                    basis.weighted_sum(&pts, &wts)
                })
                .collect())
        };
        Ok(Self { t: build(Kernel::G)?, lap: build(Kernel::LapG)?, source_nodes, output_nodes })
    }

    fn apply(rows: &[Vec<f64>], s: &[f64]) -> Vec<f64> {
        rows.iter().map(|row| row.iter().zip(s).map(|(a, b)| a * b).sum()).collect()
    }
}

fn picard_radial(
    prob: &NonlinearProblem,
    u0: &dyn RadialFunction,
    opts: &PicardOptions,
) -> std::result::Result<(Solution, SolveTrace), PicardFailure> {
    let setup = |error| PicardFailure {
        error,
        trace: SolveTrace { iterates: Vec::new(), converged: false, relaxation: opts.omega },
    };
    let ell = prob.params.length();
    let support = prob.source_support().map_err(setup)?;
    let op = RadialOperator::new(&prob.params, support, opts.radial_spacing * ell, support + 12.0 * ell).map_err(setup)?;
    let m = op.source_nodes.len();
    let square = &op.t[..m];
    let start: Vec<f64> = op.source_nodes.iter().map(|&r| u0.eval(r)).collect();
    let sources = |u: &[f64]| -> Vec<f64> { op.source_nodes.iter().zip(u).map(|(&r, &v)| prob.source(r, v)).collect() };
    let (u, trace) = iterate(start, opts, |u| Ok(RadialOperator::apply(square, &sources(u))))?;
    let s = sources(&u);
    let solution = RadialSolution {
        n: prob.n(),
        nodes: op.output_nodes.clone(),
        u: RadialOperator::apply(&op.t, &s),
        lap: RadialOperator::apply(&op.lap, &s),
    };
    Ok((Solution::Radial(solution), trace))
}

/// Finite-difference radial solver for `Δ²u + k²u = s` on `[0, R]` with
/// `u'(0) = 0` and `u(R) = 0`, factored as `(−Δ − ik)(−Δ + ik)`.
pub struct RadialFdSolver {
    pub n: usize,
    pub k: f64,
    pub spacing: f64,
    /// Nodes `j·h`, `j < len`; `u` vanishes at `len·h`.
    pub nodes: Vec<f64>,
}

impl RadialFdSolver {
    pub fn new(n: usize, k: f64, spacing: f64, outer: f64) -> Result<Self> {
        if n < 1 || !(k > 0.0) || !(spacing > 0.0) || !(outer > spacing) {
            return Err(Error::Domain(format!("bad finite-difference setup N={n}, k={k}, h={spacing}, R={outer}")));
        }
        let len = (outer / spacing).round() as usize;
        let nodes = (0..len).map(|j| j as f64 * spacing).collect();
        Ok(Self { n, k, spacing, nodes })
    }

    /// Coefficients `(lower, diag, upper)` of `−Δ_h` in row `j`.
    fn row(&self, j: usize) -> (f64, f64, f64) {
        let h2 = self.spacing * self.spacing;
        if j == 0 {
            let c = 2.0 * self.n as f64 / h2;
            return (0.0, c, -c);
        }
        let drift = (self.n as f64 - 1.0) / (2.0 * j as f64 * h2);
        (-1.0 / h2 + drift, 2.0 / h2, -1.0 / h2 - drift)
    }

    fn solve_shifted(&self, rhs: &[Complex64], shift: Complex64) -> Vec<Complex64> {
        let len = self.nodes.len();
        let mut upper = vec![Complex64::new(0.0, 0.0); len];
        let mut x = rhs.to_vec();
        let (_, d0, u0) = self.row(0);
        let mut diag = Complex64::new(d0, 0.0) + shift;
        upper[0] = Complex64::new(u0, 0.0) / diag;
        x[0] /= diag;
        for j in 1..len {
            let (l, d, u) = self.row(j);
            diag = Complex64::new(d, 0.0) + shift - l * upper[j - 1];
            upper[j] = Complex64::new(u, 0.0) / diag;
            x[j] = (x[j] - l * x[j - 1]) / diag;
        }
        for j in (0..len - 1).rev() {
            let next = x[j + 1];
            x[j] -= upper[j] * next;
        }
        x
    }

    pub fn solve(&self, s: &[f64]) -> Vec<f64> {
        let ik = Complex64::new(0.0, self.k);
        let rhs: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let w = self.solve_shifted(&rhs, -ik);
        self.solve_shifted(&w, ik).into_iter().map(|c| c.re).collect()
    }

    /// Discrete `Δ_h u`.
    pub fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        let len = u.len();
        (0..len)
            .map(|j| {
                let (l, d, up) = self.row(j);
                let left = if j == 0 { 0.0 } else { u[j - 1] };
                let right = if j + 1 < len { u[j + 1] } else { 0.0 };
                -(l * left + d * u[j] + up * right)
            })
            .collect()
    }
}

fn picard_fd(
    prob: &NonlinearProblem,
    u0: &dyn RadialFunction,
    opts: &PicardOptions,
) -> std::result::Result<(Solution, SolveTrace), PicardFailure> {
    let setup = |error| PicardFailure {
        error,
        trace: SolveTrace { iterates: Vec::new(), converged: false, relaxation: opts.omega },
    };
    let ell = prob.params.length();
    let support = prob.source_support().map_err(setup)?;
    let solver = RadialFdSolver::new(prob.n(), prob.k(), 0.1 * opts.radial_spacing * ell, support + 30.0 * ell).map_err(setup)?;
    let start: Vec<f64> = solver.nodes.iter().map(|&r| u0.eval(r)).collect();
    let map = |u: &[f64]| -> Vec<f64> {
        let s: Vec<f64> = solver.nodes.iter().zip(u).map(|(&r, &v)| prob.source(r, v)).collect();
        solver.solve(&s)
    };
    let (u, trace) = iterate(start, opts, |u| Ok(map(u)))?;
    let u = map(&u);
    let lap = solver.laplacian(&u);
    Ok((Solution::Radial(RadialSolution { n: prob.n(), nodes: solver.nodes.clone(), u, lap }), trace))
}

/// `‖Δ²u + a u − g(·,u)‖_∞` by spectral differentiation.
pub fn fixed_point_residual(prob: &NonlinearProblem, u: &Field) -> Result<f64> {
    let grid = u.grid;
    let k = prob.k();
    let lu = apply_radial_symbol(&to_complex(u), &grid, |xi2| Complex64::new(xi2 * xi2 + k * k, 0.0));
    let mut worst = 0.0f64;
    for (i, v) in lu.iter().enumerate() {
        let r = grid.point(i).iter().map(|c| c * c).sum::<f64>().sqrt();
        worst = worst.max((v.re - prob.source(r, u.data[i])).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub radius: f64,
    pub sup_u: f64,
    pub sup_lap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub tail: Vec<TailRow>,
    pub l2: f64,
    pub l4: f64,
    pub linf: f64,
    /// `‖Δu‖_2` and `‖Δ²u‖_2`.
    pub h2_seminorm: f64,
    pub h4_seminorm: f64,
}

impl RegularityReport {
    /// Both tail sups strictly decrease with `R` (or vanish).
    pub fn tail_decreasing(&self) -> bool {
        let dec = |a: f64, b: f64| b < a || (a == 0.0 && b == 0.0);
        self.tail.windows(2).all(|w| dec(w[0].sup_u, w[1].sup_u) && dec(w[0].sup_lap, w[1].sup_lap))
    }
}

/// Tail sups `sup_{|x| ≥ R} |u|, |Δu|` and discrete norms of a solution.
pub fn regularity_report(u: &Solution, params: &GreensParams, radii: &[f64]) -> Result<RegularityReport> {
    match u {
        Solution::Radial(s) => {
            if s.n != params.n {
                return Err(Error::Shape(format!("solution in N = {}, parameters in N = {}", s.n, params.n)));
            }
            let last = s.nodes.last().copied().unwrap_or(0.0);
            if let Some(r) = radii.iter().find(|&&r| r > last) {
                return Err(Error::Domain(format!("radius {r} beyond the solution range {last}")));
            }
            let tail = radii
                .iter()
                .map(|&radius| {
                    let sup = |v: &[f64]| s.nodes.iter().zip(v).filter(|(r, _)| **r >= radius).fold(0.0f64, |m, (_, x)| m.max(x.abs()));
                    TailRow { radius, sup_u: sup(&s.u), sup_lap: sup(&s.lap) }
                })
                .collect();
            let lap_profile = RadialProfile::new(s.nodes.clone(), s.lap.clone())?;
            let bilap = radial_laplacian(s.n, &lap_profile, &s.nodes);
            Ok(RegularityReport {
                tail,
                l2: radial_lp_norm(s.n, &s.nodes, &s.u, 2.0),
                l4: radial_lp_norm(s.n, &s.nodes, &s.u, 4.0),
                linf: radial_lp_norm(s.n, &s.nodes, &s.u, f64::INFINITY),
                h2_seminorm: radial_lp_norm(s.n, &s.nodes, &s.lap, 2.0),
                h4_seminorm: radial_lp_norm(s.n, &s.nodes, &bilap, 2.0),
            })
        }
        Solution::Grid(f) => {
            let grid = f.grid;
            if grid.dim != params.n {
                return Err(Error::Shape(format!("grid in N = {}, parameters in N = {}", grid.dim, params.n)));
            }
            let c = to_complex(f);
            let lap: Vec<f64> = apply_radial_symbol(&c, &grid, |xi2| Complex64::new(-xi2, 0.0)).into_iter().map(|v| v.re).collect();
            let bilap: Vec<f64> = apply_radial_symbol(&c, &grid, |xi2| Complex64::new(xi2 * xi2, 0.0)).into_iter().map(|v| v.re).collect();
            let radius: Vec<f64> = (0..grid.len()).map(|i| grid.point(i).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
            let tail = radii
                .iter()
                .map(|&r0| {
                    let sup = |v: &[f64]| radius.iter().zip(v).filter(|(r, _)| **r >= r0).fold(0.0f64, |m, (_, x)| m.max(x.abs()));
                    TailRow { radius: r0, sup_u: sup(&f.data), sup_lap: sup(&lap) }
                })
                .collect();
            let vol = grid.cell_volume();
            let norm = |v: &[f64], p: f64| (vol * v.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p);
            Ok(RegularityReport {
                tail,
                l2: norm(&f.data, 2.0),
                l4: norm(&f.data, 4.0),
                linf: f.max_abs(),
                h2_seminorm: norm(&lap, 2.0),
                h4_seminorm: norm(&bilap, 2.0),
            })
        }
    }
}
