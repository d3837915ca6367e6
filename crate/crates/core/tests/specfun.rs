use std::f64::consts::PI;

use biharm_core::specfun::{bessel_k, bessel_k_half_integer, bessel_k_with, Order, Regime};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn fixtures() -> Vec<(f64, Complex64, Complex64)> {
    include_str!("fixtures/bessel_k.csv")
        .lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], c(v[1], v[2]), c(v[3], v[4]))
        })
        .collect()
}

#[test]
fn matches_extended_precision_fixtures() {
    let mut worst = 0.0f64;
    for (nu, z, expected) in fixtures() {
        let k = bessel_k(Order(nu), z).unwrap();
        let err = rel(k, expected);
        worst = worst.max(err);
        assert!(err < 1e-10, "nu={nu} z={z}: got {k}, expected {expected}, rel {err:.2e}");
    }
    println!("worst relative error vs fixtures: {worst:.2e}");
}

/// Independent oracle for K_0 on the positive axis: the logarithmic series
/// `K_0(x) = -(ln(x/2)+γ) I_0(x) + Σ_{k≥1} H_k (x²/4)^k / (k!)²`, summed to
/// 200 terms with Kahan compensation.
fn k0_series_oracle(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let t = x * x / 4.0;
    let (mut i0, mut i0_c) = (0.0f64, 0.0f64);
    let (mut tail, mut tail_c) = (0.0f64, 0.0f64);
    let mut term = 1.0f64;
    let mut harmonic = 0.0f64;
    let kahan = |sum: &mut f64, comp: &mut f64, v: f64| {
        let y = v - *comp;
        let s = *sum + y;
        *comp = (s - *sum) - y;
        *sum = s;
    };
    for k in 0..200 {
        if k > 0 {
            term *= t / ((k * k) as f64);
            harmonic += 1.0 / k as f64;
        }
        kahan(&mut i0, &mut i0_c, term);
        kahan(&mut tail, &mut tail_c, harmonic * term);
    }
    -((x / 2.0).ln() + EULER) * i0 + tail
}

#[test]
fn k0_at_one_matches_series_oracle() {
    let oracle = k0_series_oracle(1.0);
    assert!((oracle - 0.4210244382).abs() < 1e-9);
    let k = bessel_k(Order(0.0), c(1.0, 0.0)).unwrap();
    assert!((k.re - oracle).abs() < 1e-9);
    for x in [0.01, 0.3, 2.0, 4.5] {
        let k = bessel_k(Order(0.0), c(x, 0.0)).unwrap().re;
        assert!((k - k0_series_oracle(x)).abs() < 1e-12 * k.abs().max(1.0));
    }
}

#[test]
fn half_order_closed_form_on_100_points() {
    // Re z > 0, |z| ∈ [0.01, 30]
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = i as f64 / 99.0;
        let modulus = 0.01 * (3000.0f64).powf(t);
        let arg = -1.4 + 2.8 * ((i * 37) % 100) as f64 / 99.0;
        let z = Complex64::from_polar(modulus, arg);
        let exact = (PI / (2.0 * z)).sqrt() * (-z).exp();
        let k = bessel_k(Order(0.5), z).unwrap();
        worst = worst.max(rel(k, exact));
    }
    assert!(worst < 1e-10, "worst {worst:.2e}");
}

#[test]
fn half_integer_closed_forms_match_general_path() {
    for m in 0..6 {
        for &(modulus, arg) in &[(0.05, 0.3), (0.9, PI / 4.0), (3.0, -1.0), (7.5, PI / 4.0), (25.0, 0.2)] {
            let z = Complex64::from_polar(modulus, arg);
            let closed = bessel_k_half_integer(m, z).unwrap();
            let general = bessel_k(Order(m as f64 + 0.5), z).unwrap();
            assert!(rel(general, closed) < 1e-10, "m={m} z={z}");
        }
    }
}

#[test]
fn regimes_agree_on_overlap_band() {
    for nu in [0.0, 0.5, 1.0, 1.5, 2.0] {
        for i in 0..=16 {
            let modulus = 4.0 + 4.0 * i as f64 / 16.0;
            for arg in [0.0, PI / 4.0, -0.6, 1.2] {
                let z = Complex64::from_polar(modulus, arg);
                let s = bessel_k_with(Order(nu), z, Regime::Series).unwrap();
                let f = bessel_k_with(Order(nu), z, Regime::ContinuedFraction).unwrap();
                assert!(rel(s, f) < 1e-8, "nu={nu} z={z} series={s} cf={f}");
            }
        }
    }
}

#[test]
fn positive_and_decreasing_on_real_axis() {
    for nu in [0.0, 0.5, 1.0, 2.5, 6.0] {
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let x = 1e-3 * (5e4f64).powf(i as f64 / 199.0);
            let k = bessel_k(Order(nu), c(x, 0.0)).unwrap();
            assert!(k.re > 0.0 && k.im == 0.0);
            assert!(k.re < prev, "nu={nu} x={x}");
            prev = k.re;
        }
    }
}

proptest! {
    #[test]
    fn three_term_recurrence(nu in 1.0f64..5.0, modulus in 1e-2f64..50.0, arg in -1.4f64..1.4) {
        // K_{ν+1} - K_{ν-1} = (2ν/z) K_ν
        let z = Complex64::from_polar(modulus, arg);
        let up = bessel_k(Order(nu + 1.0), z).unwrap();
        let down = bessel_k(Order(nu - 1.0), z).unwrap();
        let mid = bessel_k(Order(nu), z).unwrap();
        let lhs = up - down;
        let rhs = 2.0 * nu / z * mid;
        prop_assert!((lhs - rhs).norm() <= 1e-8 * up.norm().max(rhs.norm()));
    }

    #[test]
    fn conjugate_symmetry(nu in 0.0f64..6.0, modulus in 1e-3f64..40.0, arg in -1.5f64..1.5) {
        let z = Complex64::from_polar(modulus, arg);
        let a = bessel_k(Order(nu), z.conj()).unwrap();
        let b = bessel_k(Order(nu), z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * b.norm());
    }
}
