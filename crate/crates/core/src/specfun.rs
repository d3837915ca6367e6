//! Special functions: `K_ν(z)` for real order and complex argument, `Γ(x)`
//! and the surface measure of the unit sphere.
//!
//! `K_ν` is computed from the pair `(K_μ, K_{μ+1})` with `μ = ν - n`, `n` integer,
//! `-1/2 < μ ≤ 1/2`, followed by upward recurrence in the order (stable for `K`).
//! The pair comes from Temme's series for `|z| < 6` and from Steed's
//! continued fraction for `|z| ≥ 6`. At `μ = 0` Temme's series reduces to the
//! logarithmic limit formula for integer order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Radius at which evaluation switches from the series to the continued fraction.
pub const SWITCH_RADIUS: f64 = 6.0;

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

/// Real order `ν` of a Bessel function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Order(pub f64);

impl Order {
    /// `ν = (N-2)/2`.
    pub fn for_dimension(n: usize) -> Self {
        Order((n as f64 - 2.0) / 2.0)
    }

    /// `Some(m)` when `ν = m + 1/2` exactly.
    pub fn half_integer(self) -> Option<usize> {
        let twice = 2.0 * self.0.abs();
        let r = twice.round();
        (twice == r && (r as i64) % 2 == 1).then(|| ((r as i64 - 1) / 2) as usize)
    }
}

impl From<f64> for Order {
    fn from(nu: f64) -> Self {
        Order(nu)
    }
}

/// Which expansion produces the seed pair `(K_μ, K_{μ+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Series,
    ContinuedFraction,
}

fn check_argument(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("K_ν argument must be finite, got {z}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("K_ν(0) is singular".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the branch cut")));
    }
    Ok(())
}

/// Modified Bessel function of the second kind, `K_ν(z)`, `|arg z| < π`.
pub fn bessel_k(nu: Order, z: Complex64) -> Result<Complex64> {
    let regime = if z.norm() < SWITCH_RADIUS { Regime::Series } else { Regime::ContinuedFraction };
    bessel_k_with(nu, z, regime)
}

/// `K_ν(z)` with the seed regime forced. Used to cross-check the two
/// expansions on their overlap.
pub fn bessel_k_with(nu: Order, z: Complex64, regime: Regime) -> Result<Complex64> {
    check_argument(z)?;
    if !nu.0.is_finite() {
        return Err(Error::Domain(format!("order must be finite, got {}", nu.0)));
    }
    let nu = nu.0.abs();
    let shift = (nu - 0.5).ceil().max(0.0);
    let mu = nu - shift;
    let (mut k_mu, mut k_next) = match regime {
        Regime::Series => temme_pair(mu, z),
        Regime::ContinuedFraction => steed_pair(mu, z),
    };
    let two_over_z = 2.0 / z;
    let mut order = mu;
    for _ in 0..shift as usize {
        let k_up = (order + 1.0) * two_over_z * k_next + k_mu;
        k_mu = k_next;
        k_next = k_up;
        order += 1.0;
    }
    Ok(k_mu)
}

/// Pair `(K_ν, K_{ν+1})` sharing one seed evaluation.
pub fn bessel_k_pair(nu: Order, z: Complex64) -> Result<(Complex64, Complex64)> {
    let a = bessel_k(nu, z)?;
    let b = bessel_k(Order(nu.0.abs() + 1.0), z)?;
    Ok((a, b))
}

/// Closed form for half-integer order,
/// `K_{m+1/2}(z) = √(π/2z) e^{-z} Σ_j (m+j)! / (j!(m-j)!) (2z)^{-j}`.
pub fn bessel_k_half_integer(m: usize, z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0;
    let inv = 1.0 / (2.0 * z);
    let mut pow = Complex64::new(1.0, 0.0);
    for j in 0..=m {
        sum += coeff * pow;
        // (m+j+1)!/((j+1)!(m-j-1)!) = coeff * (m+j+1)(m-j)/(j+1)
        coeff *= ((m + j + 1) * (m - j)) as f64 / (j + 1) as f64;
        pow *= inv;
    }
    Ok((PI / (2.0 * z)).sqrt() * (-z).exp() * sum)
}

// Taylor coefficients of 1/Γ(x) = Σ c_k x^k (Abramowitz & Stegun 6.1.34).
const RECIP_GAMMA: [f64; 26] = [
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
];

/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1-μ))` for `|μ| ≤ 1/2`, where
/// `gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / 2μ` and `gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1±μ) = Σ_k c_{k+1} (±μ)^k; split into even and odd powers.
    let mut even = 0.0;
    let mut odd = 0.0;
    for (k, c) in RECIP_GAMMA.iter().enumerate().rev() {
        // coefficient c_{k+1} multiplies μ^k
        if k % 2 == 0 {
            even = even * mu * mu + c;
        } else {
            odd = odd * mu * mu + c;
        }
    }
    // even = Σ c_{2j+1} μ^{2j}, odd = Σ c_{2j+2} μ^{2j}
    let gam2 = even;
    let gam1 = -odd;
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (gam1, gam2, gampl, gammi)
}

/// Temme's series for `(K_μ(z), K_{μ+1}(z))`, `|μ| ≤ 1/2`.
fn temme_pair(mu: f64, z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let x2 = z / 2.0;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.norm() < 1e-8 { one + e * e / 6.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = one;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.norm() < sum.norm() * EPS && del1.norm() < sum1.norm() * EPS {
            break;
        }
    }
    (sum, sum1 * (2.0 / z))
}

/// Steed's continued fraction (Thompson & Barnett) for `(K_μ(z), K_{μ+1}(z))`,
/// valid for `Re z > 0` and accurate for moderate-to-large `|z|`.
fn steed_pair(mu: f64, z: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let a1 = 0.25 - mu * mu;
    let mut b = 2.0 * (one + z);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = Complex64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < EPS {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * z)).sqrt() * (-z).exp() / s;
    let k_next = k_mu * (mu + z + 0.5 - h) / z;
    (k_mu, k_next)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for `x > 0` (Lanczos, g = 7, n = 9).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Γ(x) requires finite x > 0, got {x}")));
    }
    // exact factorials for small integers
    if x == x.floor() && x <= 30.0 {
        return Ok((1..x as u64).map(|k| k as f64).product());
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return Ok(PI / ((PI * x).sin() * lanczos(1.0 - x)));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `w_N = 2π^{N/2} / Γ(N/2)`, the `(N-1)`-measure of the unit sphere in `R^N`.
/// `N = 1` gives 2 (the two points `±1`).
pub fn sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_fn(half).expect("N/2 > 0")
}
