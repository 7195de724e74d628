use proptest::prelude::*;
use robin_spectra::constants::{beta_w, lsc};
use robin_spectra::riesz::{riesz_mean, Cuboid, SpectralQuery};
use robin_spectra::shape::{
    classify_trajectory, maximize, maximize_with, normalized_m, OptimizerOptions, trial_slab, OptimizationProblem, Verdict,
};
use robin_spectra::thresholds::{beta_critical_1, r_excess_1d};
use robin_spectra::BoundaryCondition;

fn check_maximizer(p: &OptimizationProblem) {
    let m = maximize(p).unwrap();
    assert!((m.cuboid.volume() - 1.0).abs() < 1e-12);
    assert!(m.cuboid.sides().windows(2).all(|w| w[0] <= w[1]));
    let cube = p.evaluate(&Cuboid::unit_cube(p.d)).unwrap();
    assert!(m.value >= cube);
    assert_eq!(m.value, p.evaluate(&m.cuboid).unwrap());
    let weyl = lsc(p.gamma, p.d).unwrap() * p.lambda.powf(p.gamma + 0.5 * p.d as f64);
    assert!((m.normalized - m.value / weyl).abs() <= 1e-15 * m.normalized.abs().max(1.0));
    assert!((m.min_side_wavelengths - m.cuboid.min_side() * p.lambda.sqrt()).abs() < 1e-12);
    assert!(m.multistart_spread >= 0.0);
    // A sub-wavelength slab whose coupling is at least half its
    // thickness times λ carries a vanishing share of the Weyl term, so it
    // must never win while positive values exist.
    if m.value > 0.0 && p.beta.is_finite() && m.min_side_wavelengths < 0.5 {
        assert!(p.beta / (m.cuboid.min_side() * p.lambda) < 0.5);
    }
}

#[test]
fn large_parameter_prefers_the_cube() {
    let lambda = 1e4;
    let m = maximize(&OptimizationProblem::coupled(1.0, 2, lambda, 10.0)).unwrap();
    assert!(m.cuboid.aspect_ratio() <= 1.05, "{}", m.cuboid.aspect_ratio());
}

#[test]
fn small_parameter_collapses_at_fixed_wavelength() {
    let m = maximize(&OptimizationProblem::coupled(1.0, 2, 1e4, 0.05)).unwrap();
    assert!(m.cuboid.aspect_ratio() > 100.0);
    assert!(m.min_side_wavelengths > 0.05 && m.min_side_wavelengths < 10.0);
}

#[test]
fn supercritical_normalised_maximum_tends_to_one() {
    let beta_rel = 2.0 * beta_critical_1(1.5, 3).unwrap().value;
    let (n, _) = normalized_m(&OptimizationProblem::coupled(1.0, 2, 1e5, beta_rel)).unwrap();
    assert!((n - 1.0).abs() <= 0.02, "{n}");
}

#[test]
fn subcritical_normalised_maximum_matches_excess_ratio() {
    let beta_rel = 0.5 * beta_w(1.5, 0).unwrap().value;
    let (n, _) = normalized_m(&OptimizationProblem::coupled(1.0, 2, 1e4, beta_rel)).unwrap();
    let r = r_excess_1d(1.5, beta_rel, 1e4).unwrap().value;
    assert!(n > 1.0);
    assert!(((n - r) / r).abs() <= 0.05, "{n} vs {r}");
}

#[test]
fn trial_slabs_blow_up() {
    let mut prev = 0.0;
    for e in [3.0, 4.0, 5.0, 6.0] {
        let lambda: f64 = 10f64.powf(e);
        let beta = lambda.powf(0.25);
        let slab = trial_slab(2, lambda, beta, 1.0).unwrap();
        assert!((slab.volume() - 1.0).abs() < 1e-12);
        let v = riesz_mean(&SpectralQuery::new(1.0, lambda, BoundaryCondition::Robin(beta), slab).unwrap()).unwrap().value;
        let n = v / (lsc(1.0, 2).unwrap() * lambda * lambda);
        assert!(n > prev);
        prev = n;
    }
    assert!(prev > 2.0);
}

#[test]
fn warm_and_cold_starts_agree() {
    let beta_rel = 0.5 * beta_w(1.5, 0).unwrap().value;
    let lambdas = [200.0, 1000.0];
    let t = classify_trajectory(1.0, 2, beta_rel, &lambdas).unwrap();
    for (i, &lambda) in lambdas.iter().enumerate() {
        let cold = maximize(&OptimizationProblem::coupled(1.0, 2, lambda, beta_rel)).unwrap();
        let warm = &t.maximizers[i];
        assert!(((warm.value - cold.value) / cold.value).abs() <= 1e-6, "λ={lambda}: {} vs {}", warm.value, cold.value);
    }
}

#[test]
fn trajectory_verdicts() {
    let lambdas = [1e2, 1e3, 1e4];
    let above = classify_trajectory(1.0, 2, 2.0 * beta_critical_1(1.5, 3).unwrap().value, &lambdas).unwrap();
    assert_eq!(above.verdict, Verdict::ConvergesToCube);
    assert!(*above.aspect_trend.last().unwrap() <= 1.05);
    let below = classify_trajectory(1.0, 2, 0.5 * beta_w(1.5, 0).unwrap().value, &lambdas).unwrap();
    assert_eq!(below.verdict, Verdict::Collapses);
    assert_eq!(below.maximizers.len(), 3);
}

#[test]
fn rejects_descending_grids() {
    assert!(classify_trajectory(1.0, 2, 1.0, &[1e3, 1e2]).is_err());
}

#[test]
fn three_dimensional_search() {
    check_maximizer(&OptimizationProblem::coupled(1.0, 3, 300.0, 0.3));
    check_maximizer(&OptimizationProblem::coupled(0.5, 3, 300.0, 3.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn maximiser_invariants(gamma in 0.0f64..2.0, lambda in 30.0f64..400.0, beta_rel in 0.05f64..5.0) {
        check_maximizer(&OptimizationProblem::coupled(gamma, 2, lambda, beta_rel));
    }
}

#[test]
fn permuted_starts_give_the_same_sorted_maximizer() {
    let p = OptimizationProblem::coupled(1.0, 2, 400.0, 0.3);
    let opts = OptimizerOptions::default();
    let a = maximize_with(&p, &[vec![0.2, 5.0]], &opts).unwrap();
    let b = maximize_with(&p, &[vec![5.0, 0.2]], &opts).unwrap();
    assert!((a.value - b.value).abs() <= 1e-9 * a.value.abs());
    for (x, y) in a.cuboid.sides().iter().zip(b.cuboid.sides()) {
        assert!((x - y).abs() < 1e-6 * x, "{:?} vs {:?}", a.cuboid, b.cuboid);
    }
}

#[test]
fn maximum_grows_with_lambda_and_shrinks_with_beta() {
    let values_in_lambda: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&lambda| maximize(&OptimizationProblem { gamma: 1.0, d: 2, lambda, beta: 3.0 }).unwrap().value)
        .collect();
    for w in values_in_lambda.windows(2) {
        assert!(w[1] >= w[0] * (1.0 - 1e-9), "{values_in_lambda:?}");
    }
    let values_in_beta: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&beta| maximize(&OptimizationProblem { gamma: 1.0, d: 2, lambda: 200.0, beta }).unwrap().value)
        .collect();
    for w in values_in_beta.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{values_in_beta:?}");
    }
}
