//! Exact arithmetic over Lebesgue exponents.
//!
//! Exponents are rationals or `∞`; intervals carry open/closed flags on both
//! ends. Everything here is exact: admissibility tables distinguish `<` from
//! `≤`, which floating point cannot do reliably.
//!
//! The tables implemented are the Young-inequality ranges for convolution
//! with `G^(N)_k`, its gradient and its Laplacian, the `W^{2,s}` range for
//! solutions of the linear problem, and the `H² ⊂ L^r` Sobolev range. On top
//! of those, [`bootstrap_chain`] iterates the regularity upgrade until the
//! solution is shown to lie in `W^{2,s}` for every `2 ≤ s ≤ ∞`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"3"`, `"-2/7"`, `"1.25"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let shift = exp10 - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// A positive exponent, or `∞`.
///
/// Lebesgue exponents proper are `≥ 1`, but intermediate quantities of the
/// calculus (for instance the lower end `2N/(N+4)` of the admissible `p`
/// range when `N ≤ 3`) fall below 1, so the type only demands positivity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_positive() {
            Ok(Exponent::Finite(value))
        } else {
            Err(Error::Domain(format!("exponent must be positive, got {value}")))
        }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::new(rat(numer, denom)).expect("positive ratio")
    }

    pub fn int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Exponent::Finite(r) => Some(r),
            Exponent::Infinite => None,
        }
    }

    /// Lossy conversion for reporting and for numerical probes.
    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => rational_to_f64(r),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// Parse `"inf"`, `"∞"` or an exact rational.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "infinity" | "∞" | "Inf" => Ok(Exponent::Infinite),
            other => Self::new(parse_rational(other)?),
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: scale down both sides first.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
            (Exponent::Finite(_), Exponent::Infinite) => Ordering::Less,
            (Exponent::Infinite, Exponent::Finite(_)) => Ordering::Greater,
            (Exponent::Infinite, Exponent::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Infinite => write!(f, "∞"),
        }
    }
}

impl From<Rational> for Exponent {
    fn from(r: Rational) -> Self {
        Exponent::new(r).expect("positive rational")
    }
}

/// `p'` with `1/p + 1/p' = 1`. Maps `1 ↦ ∞` and `∞ ↦ 1`.
pub fn conjugate(p: &Exponent) -> Result<Exponent> {
    match p {
        Exponent::Infinite => Ok(Exponent::int(1)),
        Exponent::Finite(v) => {
            let one = Rational::one();
            match v.cmp(&one) {
                Ordering::Less => Err(Error::Domain(format!("conjugate needs p ≥ 1, got {v}"))),
                Ordering::Equal => Ok(Exponent::Infinite),
                Ordering::Greater => Ok(Exponent::Finite(v / (v - &one))),
            }
        }
    }
}

/// Interval of exponents with independently open or closed ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentInterval {
    pub lo: Exponent,
    pub hi: Exponent,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl ExponentInterval {
    pub fn new(lo: Exponent, lo_closed: bool, hi: Exponent, hi_closed: bool) -> Self {
        Self { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: Exponent, hi: Exponent) -> Self {
        Self::new(lo, true, hi, true)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: Exponent, hi: Exponent) -> Self {
        Self::new(lo, true, hi, false)
    }

    /// `(lo, hi]`
    pub fn open_closed(lo: Exponent, hi: Exponent) -> Self {
        Self::new(lo, false, hi, true)
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.lo_closed && self.hi_closed),
            Ordering::Less => false,
        }
    }

    pub fn contains(&self, x: &Exponent) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// Contains `∞` as an admissible value (closed at an infinite top).
    pub fn reaches_infinity(&self) -> bool {
        self.hi.is_infinite() && self.hi_closed && !self.is_empty()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Self { lo, hi, lo_closed, hi_closed }
    }

    /// `self ⊆ other`. The empty interval is a subset of everything.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        if self.is_empty() {
            return true;
        }
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Greater => true,
            Ordering::Equal => other.lo_closed || !self.lo_closed,
            Ordering::Less => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Less => true,
            Ordering::Equal => other.hi_closed || !self.hi_closed,
            Ordering::Greater => false,
        };
        lo_ok && hi_ok
    }

    /// Multiply both ends by a positive rational (ends at `∞` stay put).
    pub fn scale(&self, factor: &Rational) -> Self {
        let mul = |e: &Exponent| match e {
            Exponent::Finite(v) => Exponent::Finite(v * factor),
            Exponent::Infinite => Exponent::Infinite,
        };
        Self { lo: mul(&self.lo), hi: mul(&self.hi), ..self.clone() }
    }
}

impl fmt::Display for ExponentInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

fn check_dim(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(int(n as i64))
}

fn check_lebesgue(p: &Exponent) -> Result<()> {
    if let Exponent::Finite(v) = p {
        if *v < Rational::one() {
            return Err(Error::Domain(format!("Lebesgue exponent must be ≥ 1, got {v}")));
        }
    }
    Ok(())
}

/// Shared shape of the three Young tables: with `d` derivatives on the
/// kernel, `f ∈ L^p` gives `f * D^d G ∈ L^s` on a range whose top end is
/// `Np/(N-(4-d)p)` when `p < N/(4-d)`. The top end is closed only for the
/// undifferentiated kernel.
fn young_table(n: usize, p: &Exponent, order: i64, top_closed: bool) -> Result<ExponentInterval> {
    let nr = check_dim(n)?;
    check_lebesgue(p)?;
    let pv = match p {
        Exponent::Infinite => {
            return Ok(ExponentInterval::closed(Exponent::Infinite, Exponent::Infinite))
        }
        Exponent::Finite(v) => v.clone(),
    };
    let threshold = &nr / int(order);
    let lo = Exponent::Finite(pv.clone());
    Ok(match pv.cmp(&threshold) {
        Ordering::Greater => ExponentInterval::closed(lo, Exponent::Infinite),
        Ordering::Equal => ExponentInterval::closed_open(lo, Exponent::Infinite),
        Ordering::Less => {
            let top = &nr * &pv / (&nr - int(order) * &pv);
            ExponentInterval::new(lo, true, Exponent::Finite(top), top_closed)
        }
    })
}

/// Admissible `s` with `f * G ∈ L^s` for `f ∈ L^p`.
pub fn young_t(n: usize, p: &Exponent) -> Result<ExponentInterval> {
    young_table(n, p, 4, true)
}

/// Admissible `s` with `f * ∂_i G ∈ L^s` for `f ∈ L^p`.
pub fn young_grad(n: usize, p: &Exponent) -> Result<ExponentInterval> {
    young_table(n, p, 3, false)
}

/// Admissible `s` with `f * ΔG ∈ L^s` for `f ∈ L^p`.
pub fn young_lap(n: usize, p: &Exponent) -> Result<ExponentInterval> {
    young_table(n, p, 2, false)
}

/// Top of the range `r` with `H²(R^N) ⊂ L^r`: `2N/(N-4)` for `N ≥ 5`,
/// `∞` (not attained) for `N ≤ 4`.
pub fn sobolev_h2_critical(n: usize) -> Result<Exponent> {
    let nr = check_dim(n)?;
    if n <= 4 {
        Ok(Exponent::Infinite)
    } else {
        Ok(Exponent::Finite(int(2) * &nr / (&nr - int(4))))
    }
}

/// `[2, 2N/(N-4)]` for `N ≥ 5`, `[2, ∞)` otherwise.
pub fn sobolev_h2_range(n: usize) -> Result<ExponentInterval> {
    let top = sobolev_h2_critical(n)?;
    let closed = !top.is_infinite();
    Ok(ExponentInterval::new(Exponent::int(2), true, top, closed))
}

/// Range of `r` with `W^{2,s} ⊂ L^r` (from `r = s` upward).
pub fn sobolev_w2s_range(n: usize, s: &Exponent) -> Result<ExponentInterval> {
    let nr = check_dim(n)?;
    let sv = match s {
        Exponent::Infinite => {
            return Ok(ExponentInterval::closed(Exponent::Infinite, Exponent::Infinite))
        }
        Exponent::Finite(v) => v.clone(),
    };
    let half = &nr / int(2);
    let lo = Exponent::Finite(sv.clone());
    Ok(match sv.cmp(&half) {
        Ordering::Greater => ExponentInterval::closed(lo, Exponent::Infinite),
        Ordering::Equal => ExponentInterval::closed_open(lo, Exponent::Infinite),
        Ordering::Less => {
            let top = &nr * &sv / (&nr - int(2) * &sv);
            ExponentInterval::closed(lo, Exponent::Finite(top))
        }
    })
}

/// The `p` range `(2N/(N+4), 2]` on which the linear regularity theorem is stated.
pub fn linear_p_window(n: usize) -> Result<ExponentInterval> {
    let nr = check_dim(n)?;
    let lo = int(2) * &nr / (&nr + int(4));
    Ok(ExponentInterval::open_closed(Exponent::Finite(lo), Exponent::int(2)))
}

/// Admissible `s` with `u ∈ W^{2,s}` when `f ∈ L^p ∩ L^q`.
pub fn thm43_interval(n: usize, p: &Exponent, q: &Exponent) -> Result<ExponentInterval> {
    let nr = check_dim(n)?;
    let window = linear_p_window(n)?;
    if !window.contains(p) {
        return Err(Error::Domain(format!("p = {p} lies outside the admissible window {window}")));
    }
    if q < p {
        return Err(Error::Domain(format!("q = {q} must satisfy q ≥ p = {p}")));
    }
    let lo = p.clone();
    let qv = match q {
        Exponent::Infinite => return Ok(ExponentInterval::closed(lo, Exponent::Infinite)),
        Exponent::Finite(v) => v.clone(),
    };
    let half = &nr / int(2);
    Ok(match qv.cmp(&half) {
        Ordering::Greater => ExponentInterval::closed(lo, Exponent::Infinite),
        Ordering::Equal => ExponentInterval::closed_open(lo, Exponent::Infinite),
        Ordering::Less => {
            let top = &nr * &qv / (&nr - int(2) * &qv);
            ExponentInterval::closed_open(lo, Exponent::Finite(top))
        }
    })
}

/// `σ + 1 < (N+4)/(N-4)` when `N ≥ 5`; always true for `N ≤ 4`.
pub fn is_subcritical(n: usize, sigma: &Rational) -> bool {
    if n <= 4 {
        return true;
    }
    let nr = int(n as i64);
    sigma + Rational::one() < (&nr + int(4)) / (&nr - int(4))
}

/// Lebesgue range of the nonlinearity `f = g(x,u) - a(x)u` when
/// `u ∈ L^r` for `r ∈ u_range`: `(σ+1)p ∈ u_range`.
fn forcing_range(u_range: &ExponentInterval, sigma: &Rational) -> ExponentInterval {
    let inv = Rational::one() / (sigma + Rational::one());
    u_range.scale(&inv)
}

/// `[2/(σ+1), 2N/((N-4)(σ+1))] ∩ (2N/(N+4), 2]` (upper end open at `∞`
/// for `N ≤ 4`). Empty exactly when the growth exponent is critical or
/// worse.
pub fn initial_p_interval(n: usize, sigma: &Rational) -> Result<ExponentInterval> {
    if !sigma.is_positive() {
        return Err(Error::Domain(format!("σ must be positive, got {sigma}")));
    }
    let f_range = forcing_range(&sobolev_h2_range(n)?, sigma);
    let out = f_range.intersect(&linear_p_window(n)?);
    if out.is_empty() {
        return Err(Error::EmptyInterval(format!(
            "{f_range} ∩ {} is empty for N = {n}, σ = {sigma}",
            linear_p_window(n)?
        )));
    }
    Ok(out)
}

/// One row of a [`BootstrapTrace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    /// Function space the interval refers to, e.g. `"u ∈ L^r"`.
    pub space: String,
    pub interval: ExponentInterval,
    /// Justification for the step.
    pub tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BootstrapTrace {
    pub n: usize,
    pub sigma: Rational,
    pub steps: Vec<TraceStep>,
    pub terminated: bool,
    /// Number of applications of the linear `W^{2,s}` regularity result.
    pub step_count: usize,
}

impl BootstrapTrace {
    pub fn last(&self) -> Option<&TraceStep> {
        self.steps.last()
    }

    /// Every `s` reached by a regularity step, in order.
    pub fn regularity_exponents(&self) -> Vec<Exponent> {
        self.steps
            .iter()
            .filter(|s| s.tag.starts_with("pick s"))
            .map(|s| s.interval.lo.clone())
            .collect()
    }

    /// CSV rows `step,space,lo,lo_closed,hi,hi_closed,tag` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,space,lo,lo_closed,hi,hi_closed,tag\n");
        for (i, s) in self.steps.iter().enumerate() {
            let iv = &s.interval;
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                i,
                csv_field(&s.space),
                iv.lo,
                iv.lo_closed,
                iv.hi,
                iv.hi_closed,
                csv_field(&s.tag)
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("bootstrap chain: N = {}, σ = {}\n", self.n, self.sigma);
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{i:>3}  {:<18} {:<28} {}\n", s.space, s.interval.to_string(), s.tag));
        }
        if self.terminated {
            out.push_str(&format!(
                "terminated after {} regularity step(s): u ∈ W^{{2,s}} for all 2 ≤ s ≤ ∞, s = ∞ reached\n",
                self.step_count
            ));
        } else {
            out.push_str("not terminated\n");
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const DEFAULT_STEP_CAP: usize = 64;

/// Replay of the regularity bootstrap for `Δ²u + a(x)u = g(x,u)`, `u ∈ H²`.
///
/// Start from `u ∈ L^r`, `r ∈ [2, 2N/(N-4)]`; the growth bound gives
/// `f ∈ L^p` with `(σ+1)p` in that range; Theorem-4.3-type regularity then
/// gives `u ∈ W^{2,s}`, which feeds back through `W^{2,s} ⊂ L^r`. At every
/// step the largest admissible `q` is used; an open upper end `b` is
/// approached by the midpoint of the previously reached exponent and `b`.
pub fn bootstrap_chain(n: usize, sigma: &Rational) -> Result<BootstrapTrace> {
    bootstrap_chain_capped(n, sigma, DEFAULT_STEP_CAP)
}

pub fn bootstrap_chain_capped(n: usize, sigma: &Rational, cap: usize) -> Result<BootstrapTrace> {
    let nr = check_dim(n)?;
    if !sigma.is_positive() {
        return Err(Error::HypothesisViolated(format!("σ must be positive, got {sigma}")));
    }
    let p_window = match initial_p_interval(n, sigma) {
        Ok(iv) => iv,
        Err(Error::EmptyInterval(msg)) => return Err(Error::HypothesisViolated(msg)),
        Err(e) => return Err(e),
    };
    let half = &nr / int(2);
    let mut steps = Vec::new();
    let mut push = |space: &str, interval: ExponentInterval, tag: String| {
        steps.push(TraceStep { space: space.to_string(), interval, tag });
    };

    let mut u_range = sobolev_h2_range(n)?;
    push("u ∈ L^r", u_range.clone(), "H² Sobolev embedding".into());
    push("p window", p_window.clone(), "p ∈ [2/(σ+1), r_max/(σ+1)] ∩ (2N/(N+4), 2]".into());

    // p is fixed at the top of the window; only q grows.
    let p = p_window.hi.clone();
    let mut reached = Exponent::int(2);
    let mut step_count = 0;
    loop {
        if step_count >= cap {
            return Err(Error::NonTermination(cap));
        }
        let f_range = forcing_range(&u_range, sigma);
        push("f ∈ L^p", f_range.clone(), "growth bound: (σ+1)p ∈ r-range".into());

        let (q, q_tag) = if f_range.hi.is_infinite() && !f_range.hi_closed {
            // Any finite q is admissible; one above N/2 selects the top branch.
            let q = Exponent::Finite(Rational::from_integer(BigInt::from(n as i64)));
            (q, "pick q = N (open at ∞, q > N/2)".to_string())
        } else {
            (f_range.hi.clone(), "pick q = sup of f-range".to_string())
        };
        let q = std::cmp::max(q, p.clone());
        push("q", ExponentInterval::closed(q.clone(), q.clone()), q_tag);

        let s_range = thm43_interval(n, &p, &q)?;
        step_count += 1;
        push("u ∈ W^{2,s}", s_range.clone(), "linear W^{2,s} regularity (λ as stated)".into());

        if s_range.reaches_infinity() {
            let done = ExponentInterval::closed(Exponent::int(2), Exponent::Infinite);
            push("u ∈ W^{2,s}", done, "conclusion: 2 ≤ s ≤ ∞, s = ∞".into());
            return Ok(BootstrapTrace {
                n,
                sigma: sigma.clone(),
                steps,
                terminated: true,
                step_count,
            });
        }

        let s = pick_below(&reached, &s_range.hi, s_range.hi_closed, &nr);
        if s <= reached {
            return Err(Error::NonTermination(step_count));
        }
        push(
            "s",
            ExponentInterval::closed(s.clone(), s.clone()),
            format!("pick s (previous {reached}, bound {})", s_range.hi),
        );
        if let Exponent::Finite(sv) = &s {
            debug_assert!(sv >= &int(2));
            if *sv < half {
                debug_assert!(strict_growth_holds(n, sv));
            }
        }
        u_range = sobolev_w2s_range(n, &s)?;
        let embed_tag = match s.cmp(&Exponent::Finite(half.clone())) {
            Ordering::Less => "W^{2,s} ⊂ L^r, r ≤ Ns/(N-2s)",
            Ordering::Equal => "W^{2,s} ⊂ L^r, r < ∞ (s = N/2)",
            Ordering::Greater => "W^{2,s} ⊂ L^∞ (s > N/2)",
        };
        push("u ∈ L^r", u_range.clone(), embed_tag.into());
        reached = s;
    }
}

/// Largest admissible value below `bound`: the bound itself when closed,
/// otherwise the midpoint between `prev` and `bound`. For an open infinite
/// bound any finite value works; `max(N, prev + 1)` is used.
fn pick_below(prev: &Exponent, bound: &Exponent, closed: bool, n: &Rational) -> Exponent {
    match bound {
        Exponent::Infinite if closed => Exponent::Infinite,
        Exponent::Infinite => {
            let prev = prev.finite().cloned().unwrap_or_else(|| n.clone());
            Exponent::Finite(std::cmp::max(n.clone(), prev + Rational::one()))
        }
        Exponent::Finite(b) if closed => Exponent::Finite(b.clone()),
        Exponent::Finite(b) => {
            let prev = prev.finite().cloned().unwrap_or_else(|| b.clone());
            Exponent::Finite((prev + b) / int(2))
        }
    }
}

/// `Ns/(N-2s) > 2N/(N-4)` for `N ≥ 5` and `2 < s < N/2`.
pub fn strict_growth_holds(n: usize, s: &Rational) -> bool {
    let nr = int(n as i64);
    let lhs = &nr * s / (&nr - int(2) * s);
    let rhs = int(2) * &nr / (&nr - int(4));
    lhs > rhs
}
