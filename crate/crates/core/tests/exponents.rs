use biharm_core::error::Error;
use biharm_core::exponents::*;
use proptest::prelude::*;

fn e(n: i64, d: i64) -> Exponent {
    Exponent::from_ratio(n, d)
}

fn inf() -> Exponent {
    Exponent::Infinite
}

#[test]
fn young_table_values() {
    assert_eq!(young_t(5, &e(1, 1)).unwrap(), ExponentInterval::closed(e(1, 1), e(5, 1)));
    assert_eq!(young_t(4, &e(1, 1)).unwrap(), ExponentInterval::closed_open(e(1, 1), inf()));
    assert_eq!(young_t(3, &e(1, 1)).unwrap(), ExponentInterval::closed(e(1, 1), inf()));
    assert_eq!(young_grad(5, &e(1, 1)).unwrap(), ExponentInterval::closed_open(e(1, 1), e(5, 2)));
    assert_eq!(young_grad(3, &e(1, 1)).unwrap(), ExponentInterval::closed_open(e(1, 1), inf()));
    assert_eq!(young_grad(2, &e(1, 1)).unwrap(), ExponentInterval::closed(e(1, 1), inf()));
    assert_eq!(young_lap(5, &e(1, 1)).unwrap(), ExponentInterval::closed_open(e(1, 1), e(5, 3)));
    assert_eq!(young_lap(4, &e(2, 1)).unwrap(), ExponentInterval::closed_open(e(2, 1), inf()));
    assert_eq!(young_lap(3, &e(2, 1)).unwrap(), ExponentInterval::closed(e(2, 1), inf()));
}

#[test]
fn sobolev_and_regularity_values() {
    assert_eq!(sobolev_h2_critical(5).unwrap(), e(10, 1));
    assert_eq!(sobolev_h2_critical(4).unwrap(), inf());
    assert_eq!(sobolev_h2_critical(8).unwrap(), e(4, 1));
    assert_eq!(thm43_interval(5, &e(2, 1), &e(3, 1)).unwrap(), ExponentInterval::closed(e(2, 1), inf()));
    assert_eq!(thm43_interval(5, &e(2, 1), &e(2, 1)).unwrap(), ExponentInterval::closed_open(e(2, 1), e(10, 1)));
    assert_eq!(thm43_interval(4, &e(2, 1), &e(2, 1)).unwrap(), ExponentInterval::closed_open(e(2, 1), inf()));
}

#[test]
fn initial_window_values() {
    assert_eq!(initial_p_interval(5, &int(1)).unwrap(), ExponentInterval::open_closed(e(10, 9), e(2, 1)));
    assert_eq!(initial_p_interval(3, &int(2)).unwrap(), ExponentInterval::open_closed(e(6, 7), e(2, 1)));
    assert!(matches!(initial_p_interval(5, &int(9)), Err(Error::EmptyInterval(_))));
}

#[test]
fn kernel_derivatives_shrink_admissibility() {
    for n in 2..=10usize {
        for i in 0..=24 {
            let p = e(8 + i, 8);
            let t = young_t(n, &p).unwrap();
            let g = young_grad(n, &p).unwrap();
            let l = young_lap(n, &p).unwrap();
            assert!(l.is_subset_of(&g), "N={n} p={p}: {l} ⊄ {g}");
            assert!(g.is_subset_of(&t), "N={n} p={p}: {g} ⊄ {t}");
        }
    }
}

#[test]
fn lower_ends_increase_with_p() {
    for n in 2..=10usize {
        let lows: Vec<Exponent> = (0..=24).map(|i| young_t(n, &e(8 + i, 8)).unwrap().lo).collect();
        assert!(lows.windows(2).all(|w| w[0] <= w[1]), "N={n}");
    }
}

#[test]
fn strict_growth_on_rational_grid() {
    // 10 dimensions × 100 interior points of (2, N/2)
    let mut checked = 0;
    for n in 5..=14i64 {
        for i in 1..=100i64 {
            // s = 2 + (N/2 − 2)·i/101
            let s = int(2) + (rat(n, 2) - int(2)) * rat(i, 101);
            assert!(strict_growth_holds(n as usize, &s), "N={n} s={s}");
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

#[test]
fn chains_from_documented_cases() {
    let t = bootstrap_chain(5, &int(1)).unwrap();
    assert!(t.terminated && t.step_count <= 3);
    assert_eq!(t.last().unwrap().interval.hi, inf());
    let t = bootstrap_chain(3, &int(1)).unwrap();
    assert!(t.terminated);
    let t = bootstrap_chain(8, &rat(2, 3)).unwrap();
    assert!(t.terminated);
    for step in t.steps.iter().filter(|s| s.space == "s") {
        if let Exponent::Finite(s) = &step.interval.lo {
            if *s > int(2) && *s < int(4) {
                assert!(strict_growth_holds(8, s));
            }
        }
    }
}

/// `σ + 1 ∈ {3/2, 2, min(3, (N+4)/(N−4) − 1/10)}`.
fn sigma_grid(n: usize) -> Vec<Rational> {
    let mut top = int(3);
    if n >= 5 {
        let nr = int(n as i64);
        let crit = (&nr + int(4)) / (&nr - int(4)) - rat(1, 10);
        top = top.min(crit);
    }
    vec![rat(1, 2), int(1), top - int(1)]
}

#[test]
fn chains_terminate_under_hypothesis() {
    for n in 2..=10usize {
        for sigma in sigma_grid(n) {
            assert!(is_subcritical(n, &sigma));
            let t = bootstrap_chain(n, &sigma).unwrap();
            assert!(t.terminated && t.step_count <= 10, "N={n} σ={sigma}: {} steps", t.step_count);
        }
    }
}

#[test]
fn supercritical_chains_are_rejected() {
    for n in 5..=10i64 {
        let sigma = rat(n + 4, n - 4) + rat(1, 10) - int(1);
        assert!(matches!(bootstrap_chain(n as usize, &sigma), Err(Error::HypothesisViolated(_))), "N={n}");
    }
    assert!(matches!(bootstrap_chain(5, &int(9)), Err(Error::HypothesisViolated(_))));
}

#[test]
fn trace_serializations() {
    let t = bootstrap_chain(5, &int(1)).unwrap();
    let csv = t.to_csv();
    assert!(csv.starts_with("step,space,lo,lo_closed,hi,hi_closed,tag"));
    assert_eq!(csv.lines().count(), t.steps.len() + 1);
    assert!(t.to_text().contains("s = ∞"));
}

proptest! {
    #[test]
    fn conjugate_is_involution(num in 1i64..400, den in 1i64..400) {
        prop_assume!(num >= den);
        let p = e(num, den);
        prop_assert_eq!(conjugate(&conjugate(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn strict_growth_for_random_rationals(n in 5usize..40, num in 1i64..10_000) {
        let nr = n as i64;
        // s = 2 + (N/2 − 2)·num/10001 ∈ (2, N/2)
        let s = int(2) + (rat(nr, 2) - int(2)) * rat(num, 10_001);
        prop_assert!(strict_growth_holds(n, &s));
    }

    #[test]
    fn intersections_are_contained(a in 1i64..50, b in 1i64..50, c in 1i64..50, d in 1i64..50) {
        let x = ExponentInterval::closed(e(a.min(b), 4), e(a.max(b), 4));
        let y = ExponentInterval::closed_open(e(c.min(d), 4), e(c.max(d), 4));
        let z = x.intersect(&y);
        prop_assert!(z.is_empty() || (z.is_subset_of(&x) && z.is_subset_of(&y)));
    }
}
