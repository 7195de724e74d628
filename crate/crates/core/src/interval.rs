//! Eigenvalues of the Laplacian on an interval `(0, l)` with Neumann, Robin
//! or Dirichlet conditions imposed at both endpoints.
//!
//! Robin eigenvalues are computed on the unit interval and rescaled with
//! `λ_k(β, l) = l⁻² λ_k(βl, 1)`. On the unit interval `λ_k` is the unique root
//! in `(π²(k-1)², π²k²)` of
//!
//! * `F_k(λ) = β - √λ tan(√λ/2)` for odd `k`,
//! * `F_k(λ) = β + √λ / tan(√λ/2)` for even `k`,
//!
//! both strictly decreasing in `λ` on that band.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;

/// Boundary condition applied at every face of an interval or cuboid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Neumann,
    /// Robin condition `∂ₙu + βu = 0` with `β > 0`.
    Robin(f64),
    Dirichlet,
}

impl BoundaryCondition {
    /// Checked constructor for a Robin condition.
    pub fn robin(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(BoundaryCondition::Robin(beta))
        } else {
            Err(Error::domain(format!("Robin parameter must be positive and finite, got {beta}")))
        }
    }

    /// Interprets `f64::INFINITY` as Dirichlet and `0` as Neumann.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta == f64::INFINITY {
            Ok(BoundaryCondition::Dirichlet)
        } else if beta == 0.0 {
            Ok(BoundaryCondition::Neumann)
        } else {
            Self::robin(beta)
        }
    }

    /// The Robin parameter, with `0` for Neumann and `∞` for Dirichlet.
    pub fn beta(&self) -> f64 {
        match *self {
            BoundaryCondition::Neumann => 0.0,
            BoundaryCondition::Robin(b) => b,
            BoundaryCondition::Dirichlet => f64::INFINITY,
        }
    }

    /// Multiplies a Robin parameter by `factor`; Neumann and Dirichlet are unchanged.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            BoundaryCondition::Robin(b) => BoundaryCondition::Robin(b * factor),
            other => other,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            BoundaryCondition::Robin(b) => Self::robin(b).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// Solver settings for Robin eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Relative tolerance on the eigenvalue.
    /// The default of a few ulps matters for small `β` and large `k`, where the
    /// root sits only a few ulps inside its arctan enclosure.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Below this value of `βl` the condition is treated as Neumann.
    pub neumann_threshold: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { rel_tol: 4.0 * f64::EPSILON, max_iter: 200, neumann_threshold: 1e-12 }
    }
}

/// A computed eigenvalue with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEigenvalue {
    pub value: f64,
    /// Scale-free residual of `2√λ cos√λ + (β - λ/β) sin√λ = 0` on the unit
    /// interval. Zero for the closed-form cases.
    pub residual: f64,
    pub iterations: usize,
    /// Set when `βl` was so small that the Neumann value was returned.
    pub neumann_fallback: bool,
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::domain("eigenvalue index k starts at 1"))
    } else {
        Ok(())
    }
}

fn check_length(length: f64) -> Result<()> {
    if length.is_finite() && length > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("interval length must be positive and finite, got {length}")))
    }
}

/// Strict enclosure
/// `(πk - 2 atan(πk/β))² < λ_k < (πk - 2 atan(π(k-1)/β))²`
/// of the `k`-th Robin eigenvalue on the unit interval.
pub fn arctan_bracket(k: usize, beta: f64) -> Result<(f64, f64)> {
    check_k(k)?;
    BoundaryCondition::robin(beta)?;
    let kf = k as f64;
    let lo = PI * kf - 2.0 * (PI * kf / beta).atan();
    let hi = PI * kf - 2.0 * (PI * (kf - 1.0) / beta).atan();
    Ok((lo * lo, hi * hi))
}

/// The parity root function `F_k(β, λ)` and its `λ`-derivative.
fn parity_function(k: usize, beta: f64, lambda: f64) -> (f64, f64) {
    let s = lambda.sqrt();
    let half = 0.5 * s;
    if k % 2 == 1 {
        let f = beta - s * half.tan();
        let df = -(s + s.sin()) / (2.0 * s * (1.0 + s.cos()));
        (f, df)
    } else {
        let f = beta + s / half.tan();
        let df = -(s - s.sin()) / (2.0 * s * (1.0 - s.cos()));
        (f, df)
    }
}

/// Scale-free residual of the pole-free eigenvalue equation.
fn normalized_residual(beta: f64, lambda: f64) -> f64 {
    let s = lambda.sqrt();
    let num = 2.0 * s * s.cos() + (beta - lambda / beta) * s.sin();
    num.abs() / (2.0 * s + beta + lambda / beta)
}

fn robin_unit(k: usize, beta: f64, opts: &RootOptions) -> Result<IntervalEigenvalue> {
    let (lo, hi) = arctan_bracket(k, beta)?;
    // The lower arctan bound is positive and below the root, so scaling by it
    // keeps the tolerance relative even for ground states near zero.
    let tol = opts.rel_tol * lo;
    // For tiny βl the root lies within rounding of an arctan bound, so pad the
    // bracket slightly and clip it to the band limits, which are also valid.
    let kf = k as f64;
    let neumann = (PI * (kf - 1.0)).powi(2);
    if hi - neumann <= 64.0 * f64::EPSILON * hi {
        return near_neumann(k, beta, opts);
    }
    let pad = 1e-13 * hi;
    let lo = (lo - pad).max(neumann);
    let hi = (hi + pad).min((PI * kf).powi(2));
    let r = safeguarded_newton(|x| parity_function(k, beta, x), lo, hi, tol, opts.max_iter)?;
    Ok(IntervalEigenvalue {
        value: r.root,
        residual: normalized_residual(beta, r.root),
        iterations: r.iterations,
        neumann_fallback: false,
    })
}

/// Roots within a few ulps of the Neumann value `π²(k-1)²`, where the
/// λ-equation has no resolvable sign change. Writing `√λ = π(k-1) + η`, the
/// offset solves `η = 2 atan(β/√λ)`, which stays well conditioned.
fn near_neumann(k: usize, beta: f64, opts: &RootOptions) -> Result<IntervalEigenvalue> {
    let base = PI * (k - 1) as f64;
    let g = |eta: f64| {
        let s = base + eta;
        let v = eta - 2.0 * (beta / s).atan();
        let dv = 1.0 + 2.0 * beta / (s * s + beta * beta);
        (v, dv)
    };
    let eta_lo = 2.0 * (beta / (PI * k as f64)).atan();
    let r = safeguarded_newton(g, 0.0, PI, opts.rel_tol * eta_lo, opts.max_iter)?;
    let value = (base + r.root).powi(2);
    Ok(IntervalEigenvalue {
        value,
        residual: normalized_residual(beta, value),
        iterations: r.iterations,
        neumann_fallback: false,
    })
}

/// The `k`-th eigenvalue (`k ≥ 1`) on `(0, length)`.
///
/// ```
/// use robin_spectra::interval::{eigenvalue, BoundaryCondition};
/// let d = eigenvalue(2, BoundaryCondition::Dirichlet, 1.0).unwrap();
/// assert_eq!(d.value, 4.0 * std::f64::consts::PI.powi(2));
/// let r = eigenvalue(1, BoundaryCondition::Robin(1.0), 1.0).unwrap();
/// assert!((r.value - 1.707_052_975_550_922).abs() < 1e-12);
/// ```
pub fn eigenvalue(k: usize, bc: BoundaryCondition, length: f64) -> Result<IntervalEigenvalue> {
    eigenvalue_with(k, bc, length, &RootOptions::default())
}

/// [`eigenvalue`] with explicit solver settings.
pub fn eigenvalue_with(
    k: usize,
    bc: BoundaryCondition,
    length: f64,
    opts: &RootOptions,
) -> Result<IntervalEigenvalue> {
    check_k(k)?;
    check_length(length)?;
    bc.validate()?;
    let scale = 1.0 / (length * length);
    let closed = |v: f64, fallback| IntervalEigenvalue {
        value: v * scale,
        residual: 0.0,
        iterations: 0,
        neumann_fallback: fallback,
    };
    let kf = k as f64;
    match bc {
        BoundaryCondition::Neumann => Ok(closed((PI * (kf - 1.0)).powi(2), false)),
        BoundaryCondition::Dirichlet => Ok(closed((PI * kf).powi(2), false)),
        BoundaryCondition::Robin(beta) => {
            let b = beta * length;
            if b < opts.neumann_threshold {
                return Ok(closed((PI * (kf - 1.0)).powi(2), true));
            }
            let mut e = robin_unit(k, b, opts)?;
            e.value *= scale;
            Ok(e)
        }
    }
}

/// `δ_k = πk - √λ_k ∈ (0, π)` on the unit interval, computed independently of
/// [`eigenvalue`] as the root of `δ = 2 atan((πk - δ)/β)`.
pub fn boundary_gap(k: usize, beta: f64) -> Result<f64> {
    check_k(k)?;
    BoundaryCondition::robin(beta)?;
    let pk = PI * k as f64;
    let g = |d: f64| {
        let y = (pk - d) / beta;
        let v = d - 2.0 * y.atan();
        let dv = 1.0 + 2.0 / (beta * (1.0 + y * y));
        (v, dv)
    };
    let r = safeguarded_newton(g, 0.0, PI, 1e-15, 200)?;
    Ok(r.root)
}

/// `dλ_k/dβ` on the unit interval, always in `[0, 4]`:
/// `2(1 + (-1)^{k+1} cos√λ) / (1 + |sin√λ / √λ|)`.
pub fn beta_derivative(k: usize, beta: f64) -> Result<f64> {
    let lambda = eigenvalue(k, BoundaryCondition::robin(beta)?, 1.0)?.value;
    Ok(beta_derivative_at(k, lambda))
}

pub(crate) fn beta_derivative_at(k: usize, lambda: f64) -> f64 {
    let s = lambda.sqrt();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    let ratio = if s == 0.0 { 1.0 } else { (s.sin() / s).abs() };
    2.0 * (1.0 + sign * s.cos()) / (1.0 + ratio)
}

/// Upper bound on the number of eigenvalues not exceeding `lambda_max`,
/// from the Neumann count `⌊l√Λ/π⌋ + 1`.
pub fn count_bound(length: f64, lambda_max: f64) -> usize {
    if lambda_max < 0.0 {
        0
    } else {
        (length * lambda_max.sqrt() / PI).floor() as usize + 1
    }
}

/// All eigenvalues `≤ lambda_max` in ascending order.
pub fn eigenvalues_below(bc: BoundaryCondition, length: f64, lambda_max: f64) -> Result<Vec<f64>> {
    eigenvalues_below_with(bc, length, lambda_max, &RootOptions::default())
}

/// [`eigenvalues_below`] with explicit solver settings.
pub fn eigenvalues_below_with(
    bc: BoundaryCondition,
    length: f64,
    lambda_max: f64,
    opts: &RootOptions,
) -> Result<Vec<f64>> {
    check_length(length)?;
    bc.validate()?;
    if lambda_max.is_nan() {
        return Err(Error::domain("spectral parameter is NaN"));
    }
    if lambda_max < 0.0 {
        return Ok(Vec::new());
    }
    // Every eigenvalue with index k exceeds the Neumann value π²(k-1)²/l².
    let kmax = count_bound(length, lambda_max);
    let solve = |k: usize| eigenvalue_with(k, bc, length, opts).map(|e| e.value);
    let mut values: Vec<f64> = if kmax > 4096 {
        (1..=kmax).into_par_iter().map(solve).collect::<Result<_>>()?
    } else {
        (1..=kmax).map(solve).collect::<Result<_>>()?
    };
    values.retain(|&v| v <= lambda_max);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_arguments() {
        assert!(eigenvalue(0, BoundaryCondition::Dirichlet, 1.0).is_err());
        assert!(eigenvalue(1, BoundaryCondition::Dirichlet, 0.0).is_err());
        assert!(eigenvalue(1, BoundaryCondition::Robin(-1.0), 1.0).is_err());
        assert!(arctan_bracket(1, f64::NAN).is_err());
    }

    #[test]
    fn tiny_robin_parameter_falls_back_to_neumann() {
        let e = eigenvalue(3, BoundaryCondition::Robin(1e-14), 1.0).unwrap();
        assert!(e.neumann_fallback);
        assert_eq!(e.value, 4.0 * PI * PI);
    }

    #[test]
    fn residual_is_small() {
        for k in [1, 2, 7, 100] {
            for beta in [1e-3, 0.5, 3.0, 1e4] {
                let e = eigenvalue(k, BoundaryCondition::Robin(beta), 1.0).unwrap();
                assert!(e.residual < 1e-10, "k={k} beta={beta} residual={}", e.residual);
            }
        }
    }

    #[test]
    fn derivative_tends_to_two_for_small_beta() {
        let d = beta_derivative(1, 1e-6).unwrap();
        assert!((d - 2.0).abs() < 1e-5);
    }

    #[test]
    fn eigenvalues_below_respects_limit() {
        let v = eigenvalues_below(BoundaryCondition::Robin(2.0), 3.0, 200.0).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|&x| x <= 200.0));
        let next = eigenvalue(v.len() + 1, BoundaryCondition::Robin(2.0), 3.0).unwrap();
        assert!(next.value > 200.0);
    }
}
