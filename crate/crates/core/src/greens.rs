//! Fundamental solutions of `-Δ + m²` and `Δ² + k²` in `R^N`.
//!
//! The biharmonic kernel is obtained from the factorization
//! `1/(a² + k²) = (1/(2ik)) [1/(a - ik) - 1/(a + ik)]` of its symbol
//! (`a = |ξ|²`), which gives `G = -(1/k) Im g(m₊)` with `m₊ = √k e^{iπ/4}`
//! and `g(m)` the modified Helmholtz kernel. Radial derivatives and the
//! Laplacian follow from `G_N' = -2πr G_{N+2}`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::quadrature::{composite, GaussLegendre};
use crate::specfun::{bessel_k, gamma_fn, sphere_area, Order};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this radius kernel values come from the small-r expansion.
pub const NEAR_ZERO_RADIUS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreensParams {
    pub n: usize,
    pub k: f64,
    /// `(N - 2) / 2`
    pub nu: f64,
    /// `√k e^{iπ/4}`
    pub m_plus: Complex64,
    /// `√(k/2)` = `Re m₊`
    pub decay_rate: f64,
}

impl GreensParams {
    pub fn new(n: usize, k: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("k must be positive and finite, got {k}")));
        }
        Ok(Self {
            n,
            k,
            nu: (n as f64 - 2.0) / 2.0,
            m_plus: Complex64::from_polar(k.sqrt(), FRAC_PI_4),
            decay_rate: (k / 2.0).sqrt(),
        })
    }

    /// Same `k` in another dimension.
    pub fn in_dimension(&self, n: usize) -> Self {
        Self::new(n, self.k).expect("dimension shift keeps parameters valid")
    }

    /// Spectral parameter of `Δ²u - λu = f`.
    pub fn lambda(&self) -> f64 {
        -self.k * self.k
    }

    /// Natural length `1/√k`.
    pub fn length(&self) -> f64 {
        1.0 / self.k.sqrt()
    }
}

/// `coeff · r^exponent · (ln r if log_flag) + constant`, valid as `r → 0`,
/// with error `O(r^remainder_order)` relative to the leading behaviour.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticForm {
    pub leading_coeff: f64,
    pub exponent: f64,
    pub log_flag: bool,
    pub remainder_order: f64,
    pub constant: f64,
}

impl AsymptoticForm {
    pub fn eval(&self, r: f64) -> f64 {
        let mut v = self.leading_coeff * r.powf(self.exponent);
        if self.log_flag {
            v *= r.ln();
        }
        v + self.constant
    }

    /// Singular power as `r → 0`: `Some(exponent)` for `r^exponent` with a
    /// negative exponent, `Some(0)` for a pure logarithm, `None` if bounded.
    pub fn singular_power(&self) -> Option<f64> {
        if self.leading_coeff == 0.0 {
            return None;
        }
        if self.exponent < 0.0 {
            Some(self.exponent)
        } else if self.exponent == 0.0 && self.log_flag {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.singular_power().is_none()
    }
}

/// `g(r) = (2π)^{-N/2} (m/r)^ν K_ν(m r)`, the fundamental solution of `-Δ + m²`.
pub fn mod_helmholtz_kernel(n: usize, m: Complex64, r: f64) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if !(m.re > 0.0) {
        return Err(Error::Domain(format!("mass must have positive real part, got {m}")));
    }
    let nu = (n as f64 - 2.0) / 2.0;
    let k = bessel_k(Order(nu), m * r)?;
    Ok((2.0 * PI).powf(-(n as f64) / 2.0) * (m / r).powf(nu) * k)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

/// `G^(N)_k(r)`, the radial fundamental solution of `Δ² + k²`.
pub fn greens_biharmonic(params: &GreensParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    if r < NEAR_ZERO_RADIUS {
        return Ok(small_r_asymptotic(params).eval(r));
    }
    greens_unswitched(params, r)
}

/// `G` without the near-zero switch (series for `√k r ≤ 1`, Bessel path beyond).
fn greens_unswitched(params: &GreensParams, r: f64) -> Result<f64> {
    if params.k.sqrt() * r <= SERIES_ARGUMENT {
        let scale = (2.0 * PI).powf(-(params.n as f64) / 2.0);
        return Ok(-scale * im_scaled_kernel_series(params.nu, params.k, r) / params.k);
    }
    let g = mod_helmholtz_kernel(params.n, params.m_plus, r)?;
    Ok(-g.im / params.k)
}

/// Below `√k r` of this, `Im g(m₊)` is summed from its power series.
const SERIES_ARGUMENT: f64 = 1.0;

/// `(ik)^p` with the power of `i` taken exactly.
fn ik_pow(k: f64, p: usize) -> Complex64 {
    let m = k.powi(p as i32);
    match p % 4 {
        0 => Complex64::new(m, 0.0),
        1 => Complex64::new(0.0, m),
        2 => Complex64::new(-m, 0.0),
        _ => Complex64::new(0.0, -m),
    }
}

/// `Im[(m/r)^ν K_ν(m r)]` for `m² = ik`, from the ascending series of
/// `K_ν`. The singular real part never enters, so there is no cancellation
/// as `r → 0`.
fn im_scaled_kernel_series(nu: f64, k: f64, r: f64) -> f64 {
    const TERMS: usize = 60;
    let rr = r * r;
    let n = nu.round();
    if (nu - n).abs() < 1e-12 {
        let n = n as usize;
        let mut total = Complex64::new(0.0, 0.0);
        // finite part: ½ 2^n r^{-2n} Σ_{j<n} (n-j-1)!/j! (-m²r²/4)^j
        let mut fact = vec![1.0f64; 2 * TERMS + n + 2];
        for i in 1..fact.len() {
            fact[i] = fact[i - 1] * i as f64;
        }
        for j in 0..n {
            let c = 0.5 * 2f64.powi(n as i32) * r.powi(-2 * n as i32) * fact[n - j - 1] / fact[j]
                * (-rr / 4.0).powi(j as i32);
            total += ik_pow(k, j) * c;
        }
        let log = Complex64::new((k.sqrt() * r / 2.0).ln(), FRAC_PI_4);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut psi_a = -EULER_GAMMA;
        let mut psi_b = -EULER_GAMMA + (1..=n).map(|i| 1.0 / i as f64).sum::<f64>();
        for j in 0..TERMS {
            if j > 0 {
                psi_a += 1.0 / j as f64;
                psi_b += 1.0 / (n + j) as f64;
            }
            let base = rr.powi(j as i32) / (2f64.powi((n + 2 * j) as i32) * fact[j] * fact[n + j]);
            let mpow = ik_pow(k, n + j);
            let term = mpow * (-sign * log + 0.5 * sign * (psi_a + psi_b)) * base;
            total += term;
            if j > 2 && term.norm() < 1e-18 * total.norm() {
                break;
            }
        }
        total.im
    } else {
        let mut minus = Complex64::new(0.0, 0.0);
        let mut plus = Complex64::new(0.0, 0.0);
        // reflection for negative arguments
        let inv_gamma = |x: f64| {
            if x > 0.0 {
                1.0 / gamma_fn(x).expect("positive argument")
            } else {
                gamma_fn(1.0 - x).expect("positive argument") * (PI * x).sin() / PI
            }
        };
        let mut jfact = 1.0f64;
        for j in 0..TERMS {
            if j > 0 {
                jfact *= j as f64;
            }
            let tm = ik_pow(k, j)
                * (rr.powi(j as i32) * r.powf(-2.0 * nu) * 2f64.powf(nu - 2.0 * j as f64) / jfact
                    * inv_gamma(j as f64 + 1.0 - nu));
            let tp = Complex64::from_polar(k.powf(nu + j as f64), PI * (nu + j as f64) / 2.0)
                * (rr.powi(j as i32) * 2f64.powf(-nu - 2.0 * j as f64) / jfact * inv_gamma(j as f64 + nu + 1.0));
            minus += tm;
            plus += tp;
            if j > 2 && tm.norm() < 1e-18 * minus.norm() && tp.norm() < 1e-18 * minus.norm().max(plus.norm()) {
                break;
            }
        }
        (PI / (2.0 * (nu * PI).sin()) * (minus - plus)).im
    }
}

fn shifted(params: &GreensParams, extra: usize, r: f64) -> Result<f64> {
    greens_biharmonic(&params.in_dimension(params.n + extra), r)
}

/// `G'(r) = -2πr G^(N+2)(r)`; the gradient is this times `x/|x|`.
pub fn greens_radial_derivative(params: &GreensParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(-2.0 * PI * r * shifted(params, 2, r)?)
}

/// `ΔG = 4π²r² G^(N+4) - 2πN G^(N+2)`.
pub fn greens_laplacian(params: &GreensParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let n = params.n as f64;
    Ok(4.0 * PI * PI * r * r * shifted(params, 4, r)? - 2.0 * PI * n * shifted(params, 2, r)?)
}

/// `(ΔG)' = -8π³r³ G^(N+6) + (8 + 4N)π² r G^(N+4)`.
pub fn greens_laplacian_radial_derivative(params: &GreensParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let n = params.n as f64;
    Ok(-8.0 * PI.powi(3) * r.powi(3) * shifted(params, 6, r)?
        + (8.0 + 4.0 * n) * PI * PI * r * shifted(params, 4, r)?)
}

/// `G` at a point of `R^N`.
pub fn greens_at(params: &GreensParams, x: &[f64]) -> Result<f64> {
    greens_biharmonic(params, norm(x))
}

/// `∇G` at a point of `R^N`.
pub fn greens_gradient_at(params: &GreensParams, x: &[f64]) -> Result<Vec<f64>> {
    let r = norm(x);
    let d = greens_radial_derivative(params, r)?;
    Ok(x.iter().map(|xi| d * xi / r).collect())
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Leading small-r behaviour of `G^(N)_k`.
pub fn small_r_asymptotic(params: &GreensParams) -> AsymptoticForm {
    let (n, k, nu) = (params.n, params.k, params.nu);
    let two_pi_n2 = (2.0 * PI).powf(n as f64 / 2.0);
    match n {
        2 => AsymptoticForm {
            leading_coeff: 1.0 / (8.0 * k),
            exponent: 0.0,
            log_flag: false,
            remainder_order: 2.0,
            constant: 0.0,
        },
        3 => AsymptoticForm {
            leading_coeff: 1.0 / (4.0 * PI * (2.0 * k).sqrt()),
            exponent: 0.0,
            log_flag: false,
            remainder_order: 1.0,
            constant: 0.0,
        },
        4 => AsymptoticForm {
            leading_coeff: -1.0 / (8.0 * PI * PI),
            exponent: 0.0,
            log_flag: true,
            remainder_order: 2.0,
            constant: -((k.sqrt() / 2.0).ln() + EULER_GAMMA - 0.5) / (8.0 * PI * PI),
        },
        _ => AsymptoticForm {
            leading_coeff: 2f64.powf(nu - 2.0) * gamma_fn(nu - 1.0).expect("ν - 1 > 0") / (2.0 * two_pi_n2),
            exponent: 2.0 - 2.0 * nu,
            log_flag: false,
            remainder_order: 4.0 - 2.0 * nu,
            constant: 0.0,
        },
    }
}

/// Which kernel is meant: `G`, `|∇G|` or `ΔG`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivative {
    None,
    Grad,
    Lap,
}

impl Derivative {
    pub fn name(self) -> &'static str {
        match self {
            Derivative::None => "none",
            Derivative::Grad => "grad",
            Derivative::Lap => "lap",
        }
    }
}

/// Evaluate the selected kernel (radial derivative for `Grad`).
pub fn kernel_value(params: &GreensParams, derivative: Derivative, r: f64) -> Result<f64> {
    match derivative {
        Derivative::None => greens_biharmonic(params, r),
        Derivative::Grad => greens_radial_derivative(params, r),
        Derivative::Lap => greens_laplacian(params, r),
    }
}

/// Like [`kernel_value`] but without the switch to the small-r form below
/// `NEAR_ZERO_RADIUS`, so the result is smooth in `r` on `(0, ∞)`.
pub fn kernel_value_smooth(params: &GreensParams, derivative: Derivative, r: f64) -> Result<f64> {
    check_radius(r)?;
    let up = |extra: usize| greens_unswitched(&params.in_dimension(params.n + extra), r);
    let n = params.n as f64;
    Ok(match derivative {
        Derivative::None => greens_unswitched(params, r)?,
        Derivative::Grad => -2.0 * PI * r * up(2)?,
        Derivative::Lap => 4.0 * PI * PI * r * r * up(4)? - 2.0 * PI * n * up(2)?,
    })
}

/// Leading small-r behaviour of `G`, `G'` or `ΔG`.
pub fn kernel_asymptotic(params: &GreensParams, derivative: Derivative) -> AsymptoticForm {
    let n = params.n;
    match derivative {
        Derivative::None => small_r_asymptotic(params),
        Derivative::Grad => {
            let up = small_r_asymptotic(&params.in_dimension(n + 2));
            if n == 2 {
                // -2πr (c ln r + d)
                AsymptoticForm {
                    leading_coeff: -2.0 * PI * up.leading_coeff,
                    exponent: 1.0,
                    log_flag: true,
                    remainder_order: 0.0,
                    constant: 0.0,
                }
            } else {
                AsymptoticForm {
                    leading_coeff: -2.0 * PI * up.leading_coeff,
                    exponent: up.exponent + 1.0,
                    log_flag: false,
                    remainder_order: 2.0,
                    constant: 0.0,
                }
            }
        }
        Derivative::Lap => {
            let two_pi_n2 = (2.0 * PI).powf(n as f64 / 2.0);
            if n == 2 {
                // ΔG = -Re g = (ln r + ln(√k/2) + γ) / 2π
                AsymptoticForm {
                    leading_coeff: 1.0 / (2.0 * PI),
                    exponent: 0.0,
                    log_flag: true,
                    remainder_order: 2.0,
                    constant: ((params.k.sqrt() / 2.0).ln() + EULER_GAMMA) / (2.0 * PI),
                }
            } else {
                let nu = params.nu;
                AsymptoticForm {
                    leading_coeff: -(2f64.powf(nu - 1.0)) * gamma_fn(nu).expect("ν > 0") / two_pi_n2,
                    exponent: -2.0 * nu,
                    log_flag: false,
                    remainder_order: 2.0_f64.min(2.0 * nu),
                    constant: 0.0,
                }
            }
        }
    }
}

/// Pointwise check of `Δ²G + k²G = 0` by 6th-order differences of `ΔG`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualSample {
    pub r: f64,
    pub residual: f64,
    /// `max(|G|, k²|G|, |(ΔG)''| + (N-1)/r |(ΔG)'|)`
    pub scale: f64,
}

impl ResidualSample {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale
    }
}

pub fn biharmonic_residual(params: &GreensParams, r: f64) -> Result<ResidualSample> {
    check_radius(r)?;
    let h = 1e-2 * r.min(params.length());
    let lap = |x: f64| greens_laplacian(params, x);
    let mut samples = [0.0; 7];
    for (j, s) in samples.iter_mut().enumerate() {
        *s = lap(r + (j as f64 - 3.0) * h)?;
    }
    let d1 = (-samples[0] + 9.0 * samples[1] - 45.0 * samples[2] + 45.0 * samples[4] - 9.0 * samples[5]
        + samples[6])
        / (60.0 * h);
    let d2 = (2.0 * samples[0] - 27.0 * samples[1] + 270.0 * samples[2] - 490.0 * samples[3]
        + 270.0 * samples[4]
        - 27.0 * samples[5]
        + 2.0 * samples[6])
        / (180.0 * h * h);
    let n = params.n as f64;
    let g = greens_biharmonic(params, r)?;
    let bilap = d2 + (n - 1.0) / r * d1;
    let residual = bilap + params.k * params.k * g;
    let scale = g.abs().max(params.k * params.k * g.abs()).max(d2.abs() + (n - 1.0) / r * d1.abs());
    Ok(ResidualSample { r, residual, scale })
}

/// 5-point central difference of `f` at `r` with step `h`.
pub fn five_point_derivative<F: Fn(f64) -> Result<f64>>(f: F, r: f64, h: f64) -> Result<f64> {
    Ok((f(r - 2.0 * h)? - 8.0 * f(r - h)? + 8.0 * f(r + h)? - f(r + 2.0 * h)?) / (12.0 * h))
}

/// Relative disagreement between `G'` and a 5-point difference of `G`.
/// The denominator is `max(|G'|, |G|/r)` so that isolated zeros of `G'`
/// on an oscillating tail do not register as failures.
pub fn recursion_defect(params: &GreensParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let h = 1e-3 * r.min(params.length());
    let fd = five_point_derivative(|x| greens_biharmonic(params, x), r, h)?;
    let exact = greens_radial_derivative(params, r)?;
    let g = greens_biharmonic(params, r)?;
    Ok((fd - exact).abs() / exact.abs().max(g.abs() / r.max(params.length())))
}

/// Smallest `C` with `|G^(N)_k(r)| ≤ C g^(N)_δ(r)`, `g_δ` the kernel of `-Δ + δ`.
///
/// The supremum is taken on a log-graded grid over `[1e-4, 40]` and
/// recomputed on a doubled grid over `[1e-4, 80]`; a change beyond `1e-3`
/// (relative) reports `UnboundedRatio`.
pub fn domination_constant(params: &GreensParams, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("δ must be positive, got {delta}")));
    }
    let mass = Complex64::new(delta.sqrt(), 0.0);
    let sup_on = |r_max: f64, points: usize| -> Result<(f64, f64)> {
        let (r0, ratio) = (1e-4f64, (r_max / 1e-4).ln());
        let mut best = (0.0f64, r0);
        for i in 0..points {
            let r = r0 * (ratio * i as f64 / (points - 1) as f64).exp();
            let g = greens_biharmonic(params, r)?.abs();
            let w = mod_helmholtz_kernel(params.n, mass, r)?.re;
            if w > 0.0 {
                let q = g / w;
                if q > best.0 {
                    best = (q, r);
                }
            }
        }
        Ok(best)
    };
    let (coarse, _) = sup_on(40.0, 4000)?;
    let (fine, at) = sup_on(80.0, 8000)?;
    if !coarse.is_finite() || !fine.is_finite() || (fine - coarse).abs() > 1e-3 * fine.abs() {
        return Err(Error::UnboundedRatio { sup: fine, at });
    }
    Ok(fine)
}

/// Outcome of an `L^p` integrability test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpVerdict {
    pub finite: bool,
    /// `‖K‖_p^p` (or `sup |K|` for `p = ∞`); `∞` when divergent.
    pub value: f64,
    /// Exponent `γ` of the shell integrals `∫_{r/2}^{r} ~ r^γ` near zero
    /// (for `p = ∞`, the ratio of the last two sup increments).
    pub observed: f64,
    pub predicted: f64,
}

/// Critical exponent of the kernel near zero: `K ∈ L^p` near 0 iff `p < critical`
/// (finite critical), every finite `p` (`Infinite`, open), or every `p ≤ ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpThreshold {
    pub critical: Exponent,
    pub closed_at_infinity: bool,
}

/// Integrability of `G`, `|∇G|` or `|ΔG|` as tabulated: `p ∈ [1, threshold)`.
pub fn lp_table(n: usize, derivative: Derivative) -> Result<LpThreshold> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let ni = n as i64;
    let (critical, closed) = match (derivative, n) {
        (Derivative::None, 2 | 3) => (Exponent::Infinite, true),
        (Derivative::None, 4) => (Exponent::Infinite, false),
        (Derivative::None, _) => (Exponent::from_ratio(ni, ni - 4), false),
        (Derivative::Grad, 2) => (Exponent::Infinite, true),
        (Derivative::Grad, 3) => (Exponent::Infinite, false),
        (Derivative::Grad, _) => (Exponent::from_ratio(ni, ni - 3), false),
        (Derivative::Lap, 2) => (Exponent::Infinite, false),
        (Derivative::Lap, _) => (Exponent::from_ratio(ni, ni - 2), false),
    };
    Ok(LpThreshold { critical, closed_at_infinity: closed })
}

/// Whether the table places the kernel in `L^p`.
pub fn lp_table_verdict(n: usize, p: &Exponent, derivative: Derivative) -> Result<bool> {
    let t = lp_table(n, derivative)?;
    Ok(match (&t.critical, p) {
        (Exponent::Infinite, Exponent::Infinite) => t.closed_at_infinity,
        (Exponent::Infinite, _) => true,
        (Exponent::Finite(c), Exponent::Finite(q)) => q < c,
        (Exponent::Finite(_), Exponent::Infinite) => false,
    })
}

const SHELLS: usize = 18;

/// Classify `K ∈ L^p(R^N)` numerically for `K` one of `G`, `|∇G|`, `|ΔG|`.
///
/// The integral of `|K|^p w_N r^{N-1}` over dyadic shells `[2^{-j-1}, 2^{-j}]`
/// scales like `2^{-jγ}`; the observed `γ` from the innermost shells is
/// compared with `γ = pβ + N` predicted from the small-r power `β`. For
/// `p = ∞` the increments of the running supremum over successive shells
/// decide: geometric decay means bounded, constant or growing increments
/// mean unbounded. Exterior decay is exponential, so only `r → 0` matters.
pub fn lp_classify(params: &GreensParams, p: &Exponent, derivative: Derivative) -> Result<LpVerdict> {
    let pf = p.to_f64();
    if pf < 1.0 {
        return Err(Error::Domain(format!("p must be at least 1, got {pf}")));
    }
    let form = kernel_asymptotic(params, derivative);
    let n = params.n as f64;
    let beta = form.singular_power();

    let predicted = match (p, beta) {
        (Exponent::Infinite, Some(_)) => f64::INFINITY,
        (Exponent::Infinite, None) => 0.0,
        (_, Some(b)) => pf * b + n,
        (_, None) => n,
    };
    if let (Exponent::Finite(_), Some(b)) = (p, beta) {
        if b < 0.0 {
            let critical = -n / b;
            if (pf - critical).abs() < 1e-3 {
                return Err(Error::Inconclusive { p: pf, critical });
            }
        }
    }

    let rule = GaussLegendre::cached(16);
    let abs_k = |r: f64| kernel_value(params, derivative, r).map(f64::abs);

    if p.is_infinite() {
        let mut sups = Vec::with_capacity(SHELLS + 1);
        let mut running = 0.0f64;
        for j in 0..=SHELLS {
            let (lo, hi) = (2f64.powi(-(j as i32) - 1), 2f64.powi(-(j as i32)));
            for i in 0..=32 {
                let r = lo + (hi - lo) * i as f64 / 32.0;
                running = running.max(abs_k(r)?);
            }
            sups.push(running);
        }
        let inc_last = sups[SHELLS] - sups[SHELLS - 1];
        let inc_prev = sups[SHELLS - 1] - sups[SHELLS - 2];
        // bounded kernels settle geometrically; a logarithm adds a constant
        // increment per shell
        let finite = inc_last <= 1e-12 * running || inc_last <= 0.75 * inc_prev;
        let observed = if inc_prev > 0.0 { inc_last / inc_prev } else { 0.0 };
        let value = if finite { running.max(exterior_sup(params, derivative)?) } else { f64::INFINITY };
        return Ok(LpVerdict { finite, value, observed, predicted });
    }

    let wn = sphere_area(params.n);
    let mut shells = Vec::with_capacity(SHELLS + 1);
    for j in 0..=SHELLS {
        let (lo, hi) = (2f64.powi(-(j as i32) - 1), 2f64.powi(-(j as i32)));
        let (x, w) = composite(&[lo, 0.5 * (lo + hi), hi], &rule);
        let mut s = 0.0;
        for (r, wt) in x.iter().zip(&w) {
            s += wt * abs_k(*r)?.powf(pf) * wn * r.powf(n - 1.0);
        }
        shells.push(s);
    }
    let observed = (shells[SHELLS - 1] / shells[SHELLS]).log2();
    let finite = observed > 0.0;
    if !finite {
        return Ok(LpVerdict { finite, value: f64::INFINITY, observed, predicted });
    }
    // geometric tail of the remaining shells
    let q = 2f64.powf(-observed);
    let inner: f64 = shells.iter().sum::<f64>() + shells[SHELLS] * q / (1.0 - q);
    let value = inner + exterior_integral(params, derivative, pf)?;
    Ok(LpVerdict { finite, value, observed, predicted })
}

/// Outer radius beyond which `|K|^p` is below `1e-18` of its envelope.
fn exterior_radius(params: &GreensParams, p: f64) -> f64 {
    1.0 + 42.0 / (p * params.decay_rate)
}

fn exterior_integral(params: &GreensParams, derivative: Derivative, p: f64) -> Result<f64> {
    let r_max = exterior_radius(params, p);
    let width = 0.25 * params.length();
    let panels = ((r_max - 1.0) / width).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels).map(|i| 1.0 + (r_max - 1.0) * i as f64 / panels as f64).collect();
    let (x, w) = composite(&breaks, &GaussLegendre::cached(16));
    let wn = sphere_area(params.n);
    let n = params.n as f64;
    let mut s = 0.0;
    for (r, wt) in x.iter().zip(&w) {
        s += wt * kernel_value(params, derivative, *r)?.abs().powf(p) * wn * r.powf(n - 1.0);
    }
    Ok(s)
}

fn exterior_sup(params: &GreensParams, derivative: Derivative) -> Result<f64> {
    let r_max = exterior_radius(params, 1.0);
    let steps = ((r_max - 0.5) / (0.02 * params.length())).ceil() as usize;
    let mut best = 0.0f64;
    for i in 0..=steps {
        let r = 0.5 + (r_max - 0.5) * i as f64 / steps as f64;
        best = best.max(kernel_value(params, derivative, r)?.abs());
    }
    Ok(best)
}
