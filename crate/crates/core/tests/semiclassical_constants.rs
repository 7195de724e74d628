use std::f64::consts::PI;

use proptest::prelude::*;
use robin_spectra::constants::{
    beta_w, boundary_ratio, boundary_ratio_arctan, c_star, l_const, l_const_arctan, lsc, two_term_prediction,
};
use robin_spectra::riesz::{Cuboid, SpectralQuery};
use robin_spectra::special::{erfc, erfcx};
use robin_spectra::BoundaryCondition::{Dirichlet, Robin};

/// Composite Simpson rule for `(4/π) ∫₀^{π/2} cos^{2a+1}θ β/(β²+sin²θ) dθ - 1`.
fn simpson_ratio(a: f64, beta: f64) -> f64 {
    let n = 200_000;
    let h = PI / 2.0 / n as f64;
    let f = |t: f64| t.cos().powf(2.0 * a + 1.0) * beta / (beta * beta + t.sin().powi(2));
    let mut s = f(0.0) + f(PI / 2.0);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    4.0 / PI * s * h / 3.0 - 1.0
}

#[test]
fn semiclassical_constant_values() {
    assert!((lsc(0.0, 1).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert!((lsc(1.0, 1).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-15);
    assert!((lsc(0.0, 0).unwrap() - 1.0).abs() < 1e-15);
    assert!((lsc(0.0, 2).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
    assert!((lsc(0.0, 3).unwrap() - 1.0 / (6.0 * PI * PI)).abs() < 1e-16);
    assert!(lsc(-1.0, 1).is_err());
}

#[test]
fn frozen_ratios() {
    // References from 40-digit quadrature.
    assert!((boundary_ratio(1.0, 1.0).unwrap() + 0.273_239_544_735_162_69).abs() < 1e-13);
    assert!((boundary_ratio(2.5, 0.3).unwrap() - 0.215_965_632_647_324_93).abs() < 1e-13);
}

#[test]
fn matches_simpson_oracle() {
    for a in [0.5, 1.0, 1.5, 2.0, 5.0] {
        for beta in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let got = boundary_ratio(a, beta).unwrap();
            let want = simpson_ratio(a, beta);
            assert!((got - want).abs() < 1e-11, "a={a} β={beta}: {got} vs {want}");
        }
    }
}

#[test]
fn closed_forms() {
    for beta in [0.01, 0.3, 1.0, 4.0, 100.0] {
        let zero = boundary_ratio(0.0, beta).unwrap();
        assert!((zero - (4.0 / PI * (1.0 / beta).atan() - 1.0)).abs() < 1e-15);
        let half = boundary_ratio(0.5, beta).unwrap();
        let want = 2.0 * (1.0 + beta * beta).sqrt() - 2.0 * beta - 1.0;
        assert!((half - want).abs() < 1e-12, "β={beta}");
    }
    assert!(l_const(0.0, 0, 1.0).unwrap().abs() < 1e-15);
    assert!(l_const(0.5, 0, 0.75).unwrap().abs() < 1e-12);
    assert_eq!(boundary_ratio(2.0, 0.0).unwrap(), 1.0);
    assert_eq!(boundary_ratio(2.0, f64::INFINITY).unwrap(), -1.0);
}

#[test]
fn endpoint_limits() {
    let l = lsc(1.0, 0).unwrap();
    assert!((l_const(1.0, 0, 1e-8).unwrap() - l).abs() <= 1e-6);
    assert!((l_const(1.0, 0, 1e8).unwrap() + l).abs() <= 1e-6);
}

#[test]
fn arctan_form_needs_positive_exponent() {
    assert!(boundary_ratio_arctan(0.0, 1.0).is_err());
    assert!(l_const_arctan(0.0, 0, 1.0).is_err());
}

#[test]
fn sign_change_points() {
    assert!((beta_w(0.0, 0).unwrap().value - 1.0).abs() <= 1e-10);
    assert!((beta_w(0.5, 0).unwrap().value - 0.75).abs() <= 1e-10);
    assert!((beta_w(0.0, 1).unwrap().value - 0.75).abs() <= 1e-10);
    for (gamma, want) in [(1.0, 0.621_184_459_919_125_3), (2.0, 0.484_859_160_216_627_4), (10.0, 0.237_392_059_906_875_2)] {
        let b = beta_w(gamma, 0).unwrap();
        assert!((b.value - want).abs() <= 2e-10, "γ={gamma}: {} vs {want}", b.value);
        assert!(b.bracket.0 <= want && want <= b.bracket.1);
    }
    let a = beta_w(1.0, 2).unwrap().value;
    let b = beta_w(2.0, 0).unwrap().value;
    assert!((a - b).abs() <= 1e-10);
}

#[test]
fn c_star_value() {
    let c = c_star();
    assert!((c - 0.769_079_771_061_314_2).abs() < 1e-12);
    assert!((2.0 * (c * c).exp() * erfc(c) - 1.0).abs() < 1e-11);
    assert!((c - 0.769).abs() < 1e-3);
}

#[test]
fn large_order_limit() {
    let c = c_star();
    let mut prev = 0.0;
    for gamma in [10.0, 100.0, 1e3, 1e4] {
        let v = beta_w(gamma, 0).unwrap().value * f64::sqrt(gamma);
        assert!(v < c && v > prev, "γ={gamma}: {v}");
        prev = v;
    }
    assert!((prev / c - 1.0).abs() < 0.01);
}

#[test]
fn erfc_reference_values() {
    let want = 0.157_299_207_050_285_13;
    assert!(((erfc(1.0) - want) / want).abs() < 1e-14);
    let grid: Vec<f64> = (0..400).map(|i| i as f64 * 0.025).collect();
    assert!(grid.windows(2).all(|w| 2.0 * erfcx(w[1]) < 2.0 * erfcx(w[0])));
}

#[test]
fn one_dimensional_remainder_stays_bounded() {
    let grid: Vec<f64> = (0..120).map(|i| 10f64.powf(2.0 + 4.0 * i as f64 / 119.0)).collect();
    let r: Vec<f64> = grid
        .iter()
        .map(|&l| {
            let q = SpectralQuery::new(1.0, l, Robin(1.0), Cuboid::interval(1.0).unwrap()).unwrap();
            two_term_prediction(&q, true).unwrap().normalized_remainder.abs()
        })
        .collect();
    let first = r[..30].iter().cloned().fold(0.0, f64::max);
    let last = r[90..].iter().cloned().fold(0.0, f64::max);
    assert!(last <= 2.0 * first, "{first} {last}");
}

#[test]
fn dirichlet_square_second_term() {
    let q = SpectralQuery::new(1.0, 1e4, Dirichlet, Cuboid::unit_cube(2)).unwrap();
    let w = two_term_prediction(&q, false).unwrap();
    assert!(w.second < 0.0);
    assert!(w.remainder.abs() < 0.1 * w.second.abs());
}

#[test]
fn counting_has_no_second_term() {
    let q = SpectralQuery::new(0.0, 1e4, Dirichlet, Cuboid::interval(1.0).unwrap()).unwrap();
    let w = two_term_prediction(&q, false).unwrap();
    assert_eq!(w.second, 0.0);
    assert!(w.remainder.abs() <= 1.0);
}

proptest! {
    #[test]
    fn representations_agree(a in 0.05f64..8.0, beta in 1e-3f64..1e3) {
        let x = boundary_ratio(a, beta).unwrap();
        let y = boundary_ratio_arctan(a, beta).unwrap();
        prop_assert!((x - y).abs() < 1e-10, "{x} vs {y}");
    }

    #[test]
    fn decreasing_in_beta(a in 0.0f64..8.0, beta in 1e-3f64..1e3, factor in 1.001f64..10.0) {
        prop_assert!(boundary_ratio(a, beta * factor).unwrap() < boundary_ratio(a, beta).unwrap());
    }

    #[test]
    fn between_plus_and_minus_one(a in 0.0f64..20.0, beta in 1e-6f64..1e6) {
        let x = boundary_ratio(a, beta).unwrap();
        prop_assert!(x > -1.0 && x < 1.0);
    }

    #[test]
    fn sign_change_depends_on_exponent_only(gamma in 0.0f64..6.0, m in 1usize..4) {
        let a = beta_w(gamma + 0.5 * m as f64, 0).unwrap().value;
        let b = beta_w(gamma, m).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
