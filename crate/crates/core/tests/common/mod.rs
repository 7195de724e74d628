//! Independent reference computations shared by the integration tests. They
//! use plain bisection and exhaustive enumeration so that they share no code
//! path with the library solvers.
#![allow(dead_code)]

use std::f64::consts::PI;

use robin_spectra::BoundaryCondition;

/// `k`-th Robin eigenvalue of the unit interval by bisection on the pole-free
/// secular equation in `s = √λ ∈ (π(k-1), πk)`.
pub fn bisection_eigenvalue(k: usize, beta: f64) -> f64 {
    let f = |s: f64| {
        if k % 2 == 1 {
            beta * (s / 2.0).cos() - s * (s / 2.0).sin()
        } else {
            beta * (s / 2.0).sin() + s * (s / 2.0).cos()
        }
    };
    let (mut lo, mut hi) = (PI * (k - 1) as f64, PI * k as f64);
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).powi(2)
}

/// Eigenvalues `≤ lambda` of `(0, l)`, ascending, from the oracle above.
pub fn oracle_axis(bc: BoundaryCondition, l: f64, lambda: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1.. {
        let v = match bc {
            BoundaryCondition::Dirichlet => (PI * k as f64 / l).powi(2),
            BoundaryCondition::Neumann => (PI * (k - 1) as f64 / l).powi(2),
            BoundaryCondition::Robin(b) => bisection_eigenvalue(k, b * l) / (l * l),
        };
        if v > lambda * (1.0 + 1e-12) {
            break;
        }
        out.push(v);
    }
    out
}

/// Riesz mean over every multi-index of oracle eigenvalues.
pub fn brute_riesz(gamma: f64, lambda: f64, bc: BoundaryCondition, sides: &[f64]) -> f64 {
    let axes: Vec<Vec<f64>> = sides.iter().map(|&l| oracle_axis(bc, l, lambda)).collect();
    let mut total = 0.0;
    let mut terms: Vec<f64> = Vec::new();
    fn rec(axes: &[Vec<f64>], partial: f64, out: &mut Vec<f64>) {
        match axes.split_first() {
            None => out.push(partial),
            Some((head, tail)) => {
                for &e in head {
                    rec(tail, partial + e, out);
                }
            }
        }
    }
    rec(&axes, 0.0, &mut terms);
    terms.sort_by(f64::total_cmp);
    for e in terms {
        if gamma == 0.0 {
            if e <= lambda * (1.0 + 1e-12) {
                total += 1.0;
            }
        } else if e < lambda {
            total += (lambda - e).powf(gamma);
        }
    }
    total
}

/// `Σ_k (λ - π²k²)₊` for the Dirichlet unit interval, summed in closed form:
/// with `s = √λ/π` and `f = s - ⌊s⌋`,
/// `(2/(3π))λ^{3/2} - λ/2 - (π/6)√λ + π√λ f(1-f) + (π²/6) f(1-f)(1-2f)`.
pub fn dirichlet_first_order(lambda: f64) -> f64 {
    let r = lambda.sqrt();
    let s = r / PI;
    let f = s - s.floor();
    2.0 / (3.0 * PI) * lambda * r - 0.5 * lambda - PI / 6.0 * r
        + PI * r * f * (1.0 - f)
        + PI * PI / 6.0 * f * (1.0 - f) * (1.0 - 2.0 * f)
}
