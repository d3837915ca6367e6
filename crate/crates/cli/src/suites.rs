//! Kernel verification suites shared by `greens verify` and the acceptance run.

use std::f64::consts::PI;

use biharm_core::exponents::{rat, Exponent};
use biharm_core::greens::*;
use biharm_core::specfun::gamma_fn;
use biharm_core::Result;

/// Outcome of one suite: overall verdict plus one line per check.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub passed: bool,
    pub lines: Vec<String>,
    /// Lines that do not enter the verdict.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new() -> Self {
        Self { passed: true, ..Default::default() }
    }

    fn record(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.passed &= other.passed;
        self.lines.extend(other.lines);
        self.notes.extend(other.notes);
    }
}

pub const SUITES: [&str; 5] = ["pde", "recursion", "decay", "asympt", "lp"];

pub fn run_suite(name: &str, params: &GreensParams) -> Result<SuiteReport> {
    match name {
        "pde" => pde(params),
        "recursion" => recursion(params),
        "decay" => decay(params),
        "asympt" => asympt(params),
        "lp" => lp(params),
        other => Err(biharm_core::Error::Parse(format!("unknown suite {other:?}; expected one of {SUITES:?}"))),
    }
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect()
}

/// Scaled residual of `Δ²G + k²G = 0` on 40 radii in `[0.05, 10]`, bound `1e-4`.
pub fn pde(params: &GreensParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let mut worst = (0.0f64, 0.0);
    for r in log_grid(0.05, 10.0, 40) {
        let rel = biharmonic_residual(params, r)?.relative();
        if rel >= worst.0 {
            worst = (rel, r);
        }
    }
    report.record(worst.0 <= 1e-4, format!("pde N={} k={}: max scaled residual {:.3e} at r={:.3} (bound 1e-4)", params.n, params.k, worst.0, worst.1));
    Ok(report)
}

/// `G' = −2πr G^{N+2}` against 5-point differences on `[0.01, 10]`, bound `1e-6`.
pub fn recursion(params: &GreensParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let mut worst = (0.0f64, 0.0);
    for r in log_grid(0.01, 10.0, 40) {
        let d = recursion_defect(params, r)?;
        if d >= worst.0 {
            worst = (d, r);
        }
    }
    report.record(worst.0 < 1e-6, format!("recursion N={} k={}: max defect {:.3e} at r={:.3} (bound 1e-6)", params.n, params.k, worst.0, worst.1));
    Ok(report)
}

/// Weighted ratios `e^{√(k/2)r}|G|` and `e^{√(k/2)r}|∇G|` between `r = 25/√k` and `r = 1/√k`.
pub fn weighted_decay_ratios(params: &GreensParams) -> Result<(f64, f64)> {
    let l = params.length();
    let rate = params.decay_rate;
    let w = |r: f64, v: f64| (rate * r).exp() * v.abs();
    let g = w(25.0 * l, greens_biharmonic(params, 25.0 * l)?) / w(l, greens_biharmonic(params, l)?);
    let dg = w(25.0 * l, greens_radial_derivative(params, 25.0 * l)?) / w(l, greens_radial_derivative(params, l)?);
    Ok((g, dg))
}

/// Decay of `G` and `∇G`: unweighted ratio between `25/√k` and `1/√k` below
/// `1e-6`, and the weighted envelope strictly decreasing from window to window.
/// The weighted pointwise ratio is reported as a note.
pub fn decay(params: &GreensParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let l = params.length();
    let near = greens_biharmonic(params, l)?.abs();
    let far = greens_biharmonic(params, 25.0 * l)?.abs();
    let dnear = greens_radial_derivative(params, l)?.abs();
    let dfar = greens_radial_derivative(params, 25.0 * l)?.abs();
    report.record(
        far < 1e-6 * near && dfar < 1e-6 * dnear,
        format!("decay N={} k={}: |G| ratio {:.3e}, |∇G| ratio {:.3e} (bound 1e-6)", params.n, params.k, far / near, dfar / dnear),
    );
    let rate = params.decay_rate;
    let window_sup = |a: f64| -> Result<(f64, f64)> {
        let mut acc = (0.0f64, 0.0f64);
        for i in 0..200 {
            let r = (a + 8.0 * i as f64 / 199.0) * l;
            let weight = (rate * r).exp();
            acc.0 = acc.0.max(weight * greens_biharmonic(params, r)?.abs());
            acc.1 = acc.1.max(weight * greens_radial_derivative(params, r)?.abs());
        }
        Ok(acc)
    };
    let mut prev = window_sup(8.0)?;
    let mut monotone = true;
    for a in [16.0, 32.0, 64.0] {
        let cur = window_sup(a)?;
        monotone &= cur.0 < prev.0 && cur.1 < prev.1;
        prev = cur;
    }
    report.record(monotone, format!("decay N={} k={}: weighted envelope decreasing over windows starting at 8, 16, 32, 64 /√k", params.n, params.k));
    let (g, dg) = weighted_decay_ratios(params)?;
    report.notes.push(format!("weighted pointwise ratios at 25/√k vs 1/√k: G {g:.3e}, ∇G {dg:.3e}"));
    Ok(report)
}

/// `G(r)·r^{2ν−2}·2(2π)^{N/2}/(2^{ν−2}Γ(ν−1))` at `r = 1e-3/√k`.
pub fn normalized_leading(params: &GreensParams, r: f64) -> Result<f64> {
    let nu = params.nu;
    let g = greens_biharmonic(params, r)?;
    Ok(g * r.powf(2.0 * nu - 2.0) * 2.0 * (2.0 * PI).powf(params.n as f64 / 2.0) / (2f64.powf(nu - 2.0) * gamma_fn(nu - 1.0)?))
}

/// Small-`r` behavior: leading power for `N ≥ 5`, logarithm for `N = 4`,
/// finite limit for `N ≤ 3`.
pub fn asympt(params: &GreensParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let l = params.length();
    match params.n {
        n if n >= 5 => {
            let v = normalized_leading(params, 1e-3 * l)?;
            report.record((0.99..=1.01).contains(&v), format!("asympt N={n} k={}: normalized leading term {v:.6} (range [0.99, 1.01])", params.k));
        }
        4 => {
            let (r1, r2) = (1e-3 * l, 1e-4 * l);
            let ratio = greens_biharmonic(params, r2)? / greens_biharmonic(params, r1)?;
            let expected = (r2 / l).ln() / (r1 / l).ln();
            let dev = (ratio / expected - 1.0).abs();
            report.record(dev < 0.05, format!("asympt N=4 k={}: G ratio {ratio:.5} vs log ratio {expected:.5} (deviation {dev:.3e}, bound 0.05)", params.k));
        }
        n => {
            let form = small_r_asymptotic(params);
            let g0 = form.eval(0.0);
            let g = greens_biharmonic(params, 1e-7 * l)?;
            let dev = (g / g0 - 1.0).abs();
            report.record(dev < 1e-6, format!("asympt N={n} k={}: G(1e-7/√k) = {g:.10e} vs limit {g0:.10e}", params.k));
        }
    }
    Ok(report)
}

/// `p` grid straddling a threshold: `c ± 1/2` and `∞` for finite thresholds,
/// `1, 5/2, 8, ∞` otherwise (`∞` omitted where the table is undecidable).
pub fn lp_grid(n: usize, derivative: Derivative) -> Result<Vec<Exponent>> {
    let table = lp_table(n, derivative)?;
    let mut ps = Vec::new();
    match &table.critical {
        Exponent::Finite(c) => {
            ps.push(Exponent::Finite(c - rat(1, 2)));
            ps.push(Exponent::Finite(c + rat(1, 2)));
            ps.push(Exponent::Infinite);
        }
        Exponent::Infinite => {
            ps.extend([Exponent::int(1), Exponent::from_ratio(5, 2), Exponent::int(8)]);
            if !(n == 3 && derivative == Derivative::Grad) {
                ps.push(Exponent::Infinite);
            }
        }
    }
    Ok(ps.into_iter().filter(|p| p.to_f64() >= 1.0).collect())
}

/// Numerical `L^p` verdicts for `G`, `∇G`, `ΔG` against the threshold table.
pub fn lp(params: &GreensParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let n = params.n;
    for derivative in [Derivative::None, Derivative::Grad, Derivative::Lap] {
        for p in lp_grid(n, derivative)? {
            let expected = lp_table_verdict(n, &p, derivative)?;
            let v = lp_classify(params, &p, derivative)?;
            report.record(
                v.finite == expected,
                format!(
                    "lp N={n} {} p={p}: numerics {} (observed exponent {:.4}), table {}",
                    derivative.name(),
                    if v.finite { "finite" } else { "infinite" },
                    v.observed,
                    if expected { "finite" } else { "infinite" }
                ),
            );
        }
    }
    if n == 3 {
        let v = lp_classify(params, &Exponent::Infinite, Derivative::Grad)?;
        report.notes.push(format!(
            "N=3 ∇G at p=∞: numerics {} (sup {:.6e}); table entry p < ∞ is not decided numerically",
            if v.finite { "finite" } else { "infinite" },
            v.value
        ));
    }
    Ok(report)
}
