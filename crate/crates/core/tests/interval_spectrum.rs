mod common;

use std::f64::consts::PI;

use common::bisection_eigenvalue as bisection_oracle;

use proptest::prelude::*;
use robin_spectra::interval::{
    arctan_bracket, beta_derivative, boundary_gap, count_bound, eigenvalue, eigenvalue_with, eigenvalues_below,
    RootOptions,
};
use robin_spectra::BoundaryCondition::{self, Dirichlet, Neumann, Robin};

#[test]
fn closed_form_endpoints() {
    assert_eq!(eigenvalue(3, Dirichlet, 1.0).unwrap().value, (3.0 * PI).powi(2));
    assert_eq!(eigenvalue(1, Neumann, 1.0).unwrap().value, 0.0);
    assert_eq!(eigenvalue(2, Dirichlet, 2.0).unwrap().value, PI * PI);
}

#[test]
fn frozen_robin_values() {
    // 40-digit references from an independent high-precision root solve.
    let cases = [
        (1, 1.0, 1.707_052_975_550_922_5),
        (1, 1e-3, 0.001_999_666_711_106_878_4),
        (2, 1.0, 13.492_357_146_504_842),
        (3, 2.0, 46.939_447_319_767_873),
    ];
    for (k, beta, want) in cases {
        let got = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
        assert!(((got - want) / want).abs() < 1e-13, "k={k} β={beta}: {got} vs {want}");
    }
}

#[test]
fn small_beta_ground_state() {
    let l = eigenvalue(1, Robin(1e-3), 1.0).unwrap().value;
    assert!((l / 2e-3 - 1.0).abs() <= 5e-3);
}

#[test]
fn second_eigenvalue_inside_band_and_bracket() {
    let l = eigenvalue(2, Robin(1.0), 1.0).unwrap().value;
    let (lo, hi) = arctan_bracket(2, 1.0).unwrap();
    assert!(PI * PI < l && l < 4.0 * PI * PI);
    assert!(lo < l && l < hi);
}

#[test]
fn bracket_examples() {
    let (lo, hi) = arctan_bracket(1, 1.0).unwrap();
    assert!((lo - (PI - 2.0 * PI.atan()).powi(2)).abs() < 1e-15);
    assert!((hi - PI * PI).abs() < 1e-12);
    let (lo, hi) = arctan_bracket(1, 1e12).unwrap();
    assert!(hi - lo <= 1e-5);
    let (lo, hi) = arctan_bracket(10_000, 1.0).unwrap();
    let l = eigenvalue(10_000, Robin(1.0), 1.0).unwrap().value;
    assert!(lo < l && l < hi);
}

#[test]
fn boundary_gap_examples() {
    let d = boundary_gap(1, 1e6).unwrap();
    assert!(d < 1e-5 && (d / (2.0 * (PI / 1e6).atan()) - 1.0).abs() < 1e-5);
    let d = boundary_gap(1, 1.0).unwrap();
    let l = eigenvalue(1, Robin(1.0), 1.0).unwrap().value;
    assert!(((PI - d).powi(2) - l).abs() < 1e-10);
    let d = boundary_gap(5, 0.5).unwrap();
    assert!(0.0 < d && d < PI);
}

#[test]
fn derivative_examples() {
    assert!((beta_derivative(1, 1e-6).unwrap() - 2.0).abs() < 1e-5);
    let h = 1e-6;
    let fd = (eigenvalue(3, Robin(2.0 + h), 1.0).unwrap().value - eigenvalue(3, Robin(2.0 - h), 1.0).unwrap().value)
        / (2.0 * h);
    let d = beta_derivative(3, 2.0).unwrap();
    assert!(((d - fd) / fd).abs() < 1e-5);
}

#[test]
fn robin_agrees_with_bisection_oracle_across_regimes() {
    for beta in [1e-6, 1e-2, 0.3, 1.0, 7.0, 1e3, 1e8] {
        for k in [1usize, 2, 3, 10, 57, 400] {
            let got = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
            let want = bisection_oracle(k, beta);
            assert!(((got - want) / want).abs() < 1e-12, "k={k} β={beta}: {got} vs {want}");
        }
    }
}

#[test]
fn tiny_coupling_at_high_modes_sits_just_above_neumann() {
    // √λ = π(k-1) + η with η ≈ 2β/(π(k-1)), so λ ≈ π²(k-1)² + 4β.
    for beta in [1e-12, 1e-10] {
        for k in [84usize, 209, 654, 2000] {
            let got = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
            let neumann = (PI * (k - 1) as f64).powi(2);
            let ulp = neumann * f64::EPSILON;
            assert!(got >= neumann && (got - neumann - 4.0 * beta).abs() <= 4.0 * ulp, "k={k} β={beta}: {got}");
        }
    }
}

#[test]
fn listing_matches_individual_solves() {
    let bc = Robin(2.5);
    let list = eigenvalues_below(bc, 1.3, 3000.0).unwrap();
    assert!(list.len() <= count_bound(1.3, 3000.0));
    for (i, &v) in list.iter().enumerate() {
        assert_eq!(v, eigenvalue(i + 1, bc, 1.3).unwrap().value);
        assert!(v <= 3000.0);
    }
    assert!(eigenvalue(list.len() + 1, bc, 1.3).unwrap().value > 3000.0);
}

#[test]
fn tiny_parameter_falls_back_to_neumann() {
    let e = eigenvalue_with(2, Robin(1e-14), 1.0, &RootOptions::default()).unwrap();
    assert!(e.neumann_fallback);
    assert_eq!(e.value, PI * PI);
}

#[test]
fn domain_errors() {
    assert!(eigenvalue(0, Dirichlet, 1.0).is_err());
    assert!(eigenvalue(1, Dirichlet, 0.0).is_err());
    assert!(eigenvalue(1, Dirichlet, -1.0).is_err());
    assert!(BoundaryCondition::robin(-1.0).is_err());
    assert_eq!(eigenvalue(1, Dirichlet, 0.0).unwrap_err().code(), "domain");
}

proptest! {
    #[test]
    fn strictly_increasing_in_k(beta in 1e-4f64..1e4, k in 1usize..500) {
        let a = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
        let b = eigenvalue(k + 1, Robin(beta), 1.0).unwrap().value;
        prop_assert!(a < b);
    }

    #[test]
    fn interlaces_neumann_and_dirichlet(beta in 1e-4f64..1e4, k in 1usize..2000) {
        let v = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
        prop_assert!(eigenvalue(k, Neumann, 1.0).unwrap().value < v);
        prop_assert!(v < eigenvalue(k, Dirichlet, 1.0).unwrap().value);
        let (lo, hi) = arctan_bracket(k, beta).unwrap();
        prop_assert!(lo < v && v < hi);
    }

    #[test]
    fn nondecreasing_in_beta(beta in 1e-4f64..1e4, factor in 1.0001f64..10.0, k in 1usize..200) {
        let a = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
        let b = eigenvalue(k, Robin(beta * factor), 1.0).unwrap().value;
        prop_assert!(a <= b);
    }

    #[test]
    fn length_scaling(beta in 1e-3f64..1e3, l in 0.05f64..20.0, k in 1usize..100) {
        let scaled = eigenvalue(k, Robin(beta), l).unwrap().value;
        let unit = eigenvalue(k, Robin(beta * l), 1.0).unwrap().value / (l * l);
        prop_assert!(((scaled - unit) / unit).abs() < 1e-13);
    }

    #[test]
    fn derivative_in_range(beta in 1e-6f64..1e6, k in 1usize..1000) {
        let d = beta_derivative(k, beta).unwrap();
        prop_assert!((0.0..=4.0).contains(&d));
    }

    #[test]
    fn gap_route_agrees(beta in 1e-3f64..1e5, k in 1usize..3000) {
        let d = boundary_gap(k, beta).unwrap();
        let via_gap = (PI * k as f64 - d).powi(2);
        let direct = eigenvalue(k, Robin(beta), 1.0).unwrap().value;
        prop_assert!(((via_gap - direct) / direct).abs() < 1e-12);
    }
}
