mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use robin_spectra::constants::{beta_w, l_const, lsc};
use robin_spectra::thresholds::{
    autocorrelation_period, band_min_deficit, beta_critical_1, beta_critical_bounds, beta_k, deficit,
    deficit_profile, oscillation_profile, oscillation_series, r_excess_1d, sqrt_uniform_grid,
};

/// Smallest deficit over the first band for `γ = 1`, using only the
/// bisection eigenvalue: a scan uniform in `√λ` followed by ternary search.
fn oracle_first_band_min(beta: f64) -> f64 {
    let c = lsc(1.0, 1).unwrap();
    let d = |s: f64| {
        let lam = s * s;
        let e = common::bisection_eigenvalue(1, beta * s);
        c * s - (lam - e).max(0.0) / lam
    };
    let n = 4000;
    let xs: Vec<f64> = (1..=n).map(|i| PI * i as f64 / n as f64).collect();
    let (i, _) = xs.iter().map(|&s| d(s)).enumerate().fold((0, f64::INFINITY), |a, (i, v)| if v < a.1 { (i, v) } else { a });
    let (mut a, mut b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if d(m1) < d(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    d(0.5 * (a + b)).min(d(PI))
}

#[test]
fn first_band_threshold_matches_oracle() {
    let (mut lo, mut hi) = (0.5, 1.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if oracle_first_band_min(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let got = beta_k(1.0, 1).unwrap();
    assert!((got.beta_k - 0.5 * (lo + hi)).abs() < 1e-7, "{} vs {}", got.beta_k, 0.5 * (lo + hi));
}

#[test]
fn frozen_band_thresholds() {
    // From an independent double-precision scan with Brent root finding.
    let b1 = beta_k(1.0, 1).unwrap();
    assert!((b1.beta_k - 0.794_673_783_903_602_5).abs() < 1e-7);
    assert!(b1.bracket.0 <= b1.beta_k && b1.beta_k <= b1.bracket.1);
    let b2 = beta_k(10.0, 2).unwrap();
    assert!((b2.beta_k - 0.245_712_352_506_071_6).abs() < 1e-7);
}

#[test]
fn dirichlet_deficit_is_positive() {
    for lambda in [1.0, 10.0, 97.0, 1e3, 12345.6, 1e6] {
        assert!(deficit(1.0, f64::INFINITY, lambda).unwrap().deficit >= 0.0);
    }
}

#[test]
fn sign_change_point_fails_in_first_band() {
    let b = beta_w(1.0, 0).unwrap().value;
    let grid: Vec<f64> = (1..=400).map(|i| (PI * i as f64 / 400.0).powi(2)).collect();
    let s = deficit_profile(1.0, b, &grid).unwrap();
    assert!(s.iter().any(|x| x.deficit < 0.0));
    assert!(band_min_deficit(1.0, b, 1).unwrap().value < 0.0);
}

#[test]
fn deficit_approaches_boundary_constant() {
    let s = deficit(1.0, 10.0, 1e6).unwrap();
    let limit = -0.5 * l_const(1.0, 0, 10.0).unwrap();
    assert!(limit > 0.0);
    assert!((s.deficit - limit).abs() <= 1e-3, "{} vs {limit}", s.deficit);
    // Same quantity, rescaled by λ^{γ/2}.
    assert!((s.oscillation - 1e3 * (s.deficit - limit)).abs() < 1e-6);
}

#[test]
fn band_minimum_examples() {
    assert!(band_min_deficit(1.0, 1e3, 1).unwrap().value > 0.0);
    let b = beta_k(1.0, 1).unwrap().beta_k;
    assert!(band_min_deficit(1.0, b, 1).unwrap().value.abs() <= 1e-8);
}

#[test]
fn thresholds_grow_as_order_shrinks() {
    let a = beta_k(0.05, 1).unwrap().beta_k;
    let b = beta_k(0.5, 1).unwrap().beta_k;
    let c = beta_k(2.0, 1).unwrap().beta_k;
    assert!(a > b && b > c, "{a} {b} {c}");
}

#[test]
fn attaining_band() {
    let one = beta_critical_1(1.0, 3).unwrap();
    assert_eq!(one.attaining, Some(1.0));
    assert!(one.lower_bound_only);
    assert!(one.value > beta_w(1.0, 0).unwrap().value);
    assert_eq!(beta_critical_1(10.0, 3).unwrap().attaining, Some(2.0));
}

#[test]
fn dimension_sandwich() {
    let (lo, hi) = beta_critical_bounds(1.0, 2, 3).unwrap();
    assert!(lo.value <= hi.value);
    assert_eq!(hi.value, beta_critical_1(1.0, 3).unwrap().value);
    assert_eq!(lo.value, beta_critical_1(1.5, 3).unwrap().value);
}

#[test]
fn excess_ratio_examples() {
    let crit = beta_critical_1(1.0, 3).unwrap().value;
    let at = r_excess_1d(1.0, crit, 1e5).unwrap();
    assert!((at.value - 1.0).abs() <= 1e-6);
    let below = r_excess_1d(1.0, 0.5 * beta_w(1.0, 0).unwrap().value, 1e5).unwrap();
    assert!(below.value > 1.0);
    assert!(below.attaining_lambda.is_some());
    let dirichlet = r_excess_1d(1.0, f64::INFINITY, 1e4).unwrap();
    assert!(dirichlet.grid_sup <= 1.0);
}

#[test]
fn oscillation_bounded_for_large_order() {
    let lambdas: Vec<f64> = (0..600).map(|i| 10f64.powf(4.0 + 2.0 * i as f64 / 599.0)).collect();
    let p = oscillation_profile(10.0, 0.3, &lambdas).unwrap();
    let first = p.samples[..300].iter().map(|s| s.oscillation.abs()).fold(0.0, f64::max);
    let last = p.samples[300..].iter().map(|s| s.oscillation.abs()).fold(0.0, f64::max);
    assert!(last <= 2.0 * first, "{first} {last}");
}

#[test]
fn oscillation_series_frozen_values() {
    // 80-digit direct sums over high-precision eigenvalues.
    let cases = [
        (10.0, 0.25, 1e3, 311_771.530_145_958_36),
        (10.0, 0.25, 1e4, -1_081_597.092_655_851_9),
        (10.0, 1.0, 4e4, 1_005_981.576_353_644_6),
        (2.5, 0.5, 3e3, 0.228_427_801_013_563_67),
    ];
    for (gamma, beta, lambda, want) in cases {
        let got = oscillation_series(gamma, beta, lambda).unwrap();
        assert!(((got - want) / want).abs() < 1e-10, "γ={gamma} λ={lambda}: {got} vs {want}");
        // Below order 3 the sampled value comes from the direct difference,
        // which carries rounding of order ε L^sc λ^{(γ+1)/2}.
        let sample = deficit(gamma, beta, lambda).unwrap();
        let rounding = 64.0 * f64::EPSILON * lsc(gamma, 1).unwrap() * lambda.powf(0.5 * (gamma + 1.0));
        let tol = if gamma >= 3.0 { 1e-10 * want.abs() } else { rounding };
        assert!((sample.oscillation - want).abs() < tol, "{} vs {want}", sample.oscillation);
    }
}

#[test]
fn oscillation_routes_agree_where_both_are_accurate() {
    for (gamma, beta) in [(2.5, 0.4), (3.0, 1.0), (4.0, 0.7), (3.0, f64::INFINITY)] {
        for lambda in [50.0, 333.0, 2000.0] {
            let c = lsc(gamma, 1).unwrap();
            let tr = robin_spectra::thresholds::coupled_riesz_mean(gamma, beta, lambda, &Default::default()).unwrap();
            let l0 = l_const(gamma, 0, beta).unwrap();
            let direct = (c * lambda.powf(gamma + 0.5) + 0.5 * l0 * lambda.powf(gamma) - tr) * lambda.powf(-0.5 * gamma);
            let series = oscillation_series(gamma, beta, lambda).unwrap();
            let rounding = 64.0 * f64::EPSILON * c * lambda.powf(0.5 * (gamma + 1.0));
            assert!((direct - series).abs() < rounding + 1e-10 * direct.abs(), "γ={gamma} β={beta} λ={lambda}: {direct} vs {series}");
        }
    }
}

#[test]
fn oscillation_series_survives_a_cancelling_first_term() {
    // High order at small λ: the first Poisson coefficient is a small
    // integral of a large integrand. The trace comes from the bisection oracle.
    let (gamma, beta) = (10.0, 0.23739205986729262);
    for lambda in [17.378008287493753, 17.78279410038923] {
        let b = beta * f64::sqrt(lambda);
        let tr: f64 = (1..)
            .map(|k| common::bisection_eigenvalue(k, b))
            .take_while(|&e| e < lambda)
            .map(|e| (lambda - e).powf(gamma))
            .sum();
        let c = lsc(gamma, 1).unwrap();
        let l0 = l_const(gamma, 0, beta).unwrap();
        let direct = (c * lambda.powf(gamma + 0.5) + 0.5 * l0 * lambda.powf(gamma) - tr) * lambda.powf(-0.5 * gamma);
        let series = oscillation_series(gamma, beta, lambda).unwrap();
        assert!((direct - series).abs() < 1e-9 * direct.abs(), "λ={lambda}: {direct} vs {series}");
    }
}

#[test]
fn period_of_a_sampled_cosine() {
    let x: Vec<f64> = (0..1000).map(|i| (2.0 * PI * i as f64 / 37.5).cos()).collect();
    let p = autocorrelation_period(&x).unwrap();
    assert!((p - 37.5).abs() < 0.1, "{p}");
}

#[test]
fn oscillation_period_near_pi() {
    let b = beta_w(1.0, 0).unwrap().value;
    let p = oscillation_profile(1.0, b, &sqrt_uniform_grid(300.0 * PI, 320.0 * PI, 2001)).unwrap();
    assert!((p.period.unwrap() / PI - 1.0).abs() < 0.05);
    assert!(p.min < 0.0 && p.max > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deficit_nondecreasing_in_beta(gamma in 0.2f64..5.0, beta in 0.05f64..5.0, f in 1.0f64..4.0, lambda in 1.0f64..1e4) {
        let a = deficit(gamma, beta, lambda).unwrap().deficit;
        let b = deficit(gamma, beta * f, lambda).unwrap().deficit;
        prop_assert!(a <= b + 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn profile_matches_pointwise(gamma in 0.2f64..5.0, beta in 0.05f64..5.0, lambda in 1.0f64..1e4) {
        let p = deficit_profile(gamma, beta, &[lambda, 2.0 * lambda]).unwrap();
        prop_assert_eq!(p[0].deficit.to_bits(), deficit(gamma, beta, lambda).unwrap().deficit.to_bits());
    }
}
