//! Semiclassical constants, the boundary constant `L_{γ,d}(β)`, its sign
//! change `β_W(γ,d)`, the constant `c*`, and two-term Weyl predictions.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::BoundaryCondition;
use crate::quad::{integrate, integrate_smoothed, QuadOptions};
use crate::riesz::{riesz_mean_with, RieszOptions, SpectralQuery};
use crate::roots::bisect;
use crate::special::{erfcx, ln_gamma};

/// A root or threshold together with the bracket that certifies it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub value: f64,
    pub bracket: (f64, f64),
    /// Band index or spectral parameter at which the defining extremum is attained.
    pub attaining: Option<f64>,
    pub tolerance: f64,
    /// Set when the value is only a lower bound (for example a truncated supremum).
    pub lower_bound_only: bool,
}

fn check_order(gamma: f64) -> Result<()> {
    if gamma >= 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("Riesz order must be non-negative and finite, got {gamma}")))
    }
}

/// `L^sc_{γ,d} = Γ(1+γ) / ((4π)^{d/2} Γ(1+γ+d/2))`.
///
/// ```
/// use robin_spectra::constants::lsc;
/// use std::f64::consts::PI;
/// assert!((lsc(1.0, 1).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-15);
/// ```
pub fn lsc(gamma: f64, d: usize) -> Result<f64> {
    check_order(gamma)?;
    let h = 0.5 * d as f64;
    Ok((ln_gamma(1.0 + gamma) - ln_gamma(1.0 + gamma + h) - h * (4.0 * PI).ln()).exp())
}

const QUAD: QuadOptions = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 4000 };

/// `L_{γ,d}(β) / L^sc_{γ,d}` as a function of `a = γ + d/2`, from
/// `(4/π) ∫₀¹ (1-s²)^a β/(β²+s²) ds - 1`.
///
/// The Lorentzian `β/(β²+s²)` is integrated exactly and only the bounded
/// correction `((1-s²)^a - 1) β/(β²+s²)` goes to quadrature, in the variable
/// `s = sin θ`.
pub fn boundary_ratio(a: f64, beta: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("γ + d/2 must be non-negative, got {a}")));
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::domain(format!("Robin parameter must be non-negative, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    if beta == f64::INFINITY {
        return Ok(-1.0);
    }
    let exact = (1.0 / beta).atan();
    let correction = if a == 0.0 {
        0.0
    } else {
        let f = |t: f64| {
            let (s, c) = t.sin_cos();
            (c.powf(2.0 * a) - 1.0) * beta * c / (beta * beta + s * s)
        };
        integrate(f, 0.0, FRAC_PI_2, &QUAD)?.value
    };
    Ok(4.0 / PI * (exact + correction) - 1.0)
}

/// The same ratio from the arctangent representation
/// `(8/π) a ∫₀¹ x (1-x²)^{a-1} atan(x/β) dx - 1`, used as an independent check.
/// Only defined for `a > 0`.
pub fn boundary_ratio_arctan(a: f64, beta: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("the arctangent form needs γ + d/2 > 0, got {a}")));
    }
    if !(beta > 0.0) {
        return Err(Error::domain(format!("Robin parameter must be positive, got {beta}")));
    }
    if beta == f64::INFINITY {
        return Ok(-1.0);
    }
    let integral = if a >= 0.5 {
        // x = sin θ leaves sin θ cos^{2a-1} θ, bounded for a ≥ 1/2.
        let f = |t: f64| {
            let (s, c) = t.sin_cos();
            s * c.powf(2.0 * a - 1.0) * (s / beta).atan()
        };
        2.0 * a * integrate(f, 0.0, FRAC_PI_2, &QUAD)?.value
    } else {
        // w = (1-x²)^a turns 2a x (1-x²)^{a-1} dx into dw.
        let f = |w: f64| (1.0 - w.powf(1.0 / a)).max(0.0).sqrt().atan2(beta);
        integrate_smoothed(f, 0.0, 1.0, &QUAD)?.value
    };
    Ok(4.0 / PI * integral - 1.0)
}

/// `L_{γ,d}(β)`, with `β = 0` giving `L^sc_{γ,d}` and `β = ∞` giving `-L^sc_{γ,d}`.
pub fn l_const(gamma: f64, d: usize, beta: f64) -> Result<f64> {
    Ok(lsc(gamma, d)? * boundary_ratio(gamma + 0.5 * d as f64, beta)?)
}

/// `L_{γ,d}(β)` through the arctangent representation.
pub fn l_const_arctan(gamma: f64, d: usize, beta: f64) -> Result<f64> {
    Ok(lsc(gamma, d)? * boundary_ratio_arctan(gamma + 0.5 * d as f64, beta)?)
}

/// `L_{γ,d}(β)` for a boundary condition given relative to `√λ`.
pub(crate) fn l_const_bc(gamma: f64, d: usize, bc_rel: BoundaryCondition) -> Result<f64> {
    l_const(gamma, d, bc_rel.beta())
}

/// Default bracket width for `β_W`.
pub const BETA_W_TOL: f64 = 1e-10;

/// The unique zero `β_W(γ,d)` of `β ↦ L_{γ,d}(β)`.
///
/// ```
/// let b = robin_spectra::constants::beta_w(0.5, 0).unwrap();
/// assert!((b.value - 0.75).abs() < 1e-10);
/// ```
pub fn beta_w(gamma: f64, d: usize) -> Result<ThresholdResult> {
    check_order(gamma)?;
    beta_w_for_exponent(gamma + 0.5 * d as f64, BETA_W_TOL)
}

/// `β_W` as a function of `a = γ + d/2` alone.
pub fn beta_w_for_exponent(a: f64, tol: f64) -> Result<ThresholdResult> {
    let f = |b: f64| boundary_ratio(a, b).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (1e-6, 1e6);
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::domain(format!(
            "no sign change of L on [1e-6, 1e6] for γ + d/2 = {a}: {flo:e}, {fhi:e}"
        )));
    }
    // Geometric halving first, so that small roots are located in few steps.
    while hi / lo > 2.0 {
        let mid = (lo * hi).sqrt();
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = bisect(f, lo, hi, tol, 400)?;
    Ok(ThresholdResult {
        value: r.root,
        bracket: (r.lo, r.hi),
        attaining: None,
        tolerance: tol,
        lower_bound_only: false,
    })
}

/// The root `c* ≈ 0.769` of `2 e^{x²} erfc(x) = 1`.
pub fn c_star() -> f64 {
    bisect(|x| 2.0 * erfcx(x) - 1.0, 0.0, 2.0, 1e-13, 200)
        .expect("2 erfcx(x) - 1 changes sign on [0, 2]")
        .root
}

/// Two-term Weyl prediction for a Riesz mean and the normalised remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylExpansion {
    /// The computed Riesz mean.
    pub value: f64,
    /// `L^sc_{γ,d} |R| λ^{γ+d/2}`.
    pub leading: f64,
    /// `¼ L_{γ,d-1}(β/√λ) H^{d-1}(∂R) λ^{γ+(d-1)/2}`; zero for `γ = 0`.
    pub second: f64,
    /// `value - leading - second`.
    pub remainder: f64,
    /// `remainder` divided by the error scale of the two-term bound.
    pub normalized_remainder: f64,
}

/// Exponent `κ_{γ,d}` in the two-term remainder bound.
pub fn remainder_exponent(gamma: f64, d: usize) -> f64 {
    if d <= 1 {
        gamma.min(1.0)
    } else {
        (gamma / (1.0 + gamma)).min(1.0 / d as f64)
    }
}

/// Error scale `H^{d-1}(∂R) λ^{γ+(d-1)/2} ((min l √λ)^{-κ} + 1_{d≥2} (min l √λ)^{1-d})`,
/// with the surface factor dropped in one dimension.
pub fn remainder_scale(q: &SpectralQuery) -> f64 {
    let d = q.cuboid.dim();
    let kappa = remainder_exponent(q.gamma, d);
    let m = q.cuboid.min_side() * q.lambda.sqrt();
    if d == 1 {
        q.lambda.powf(q.gamma) * m.powf(-kappa)
    } else {
        let df = d as f64;
        q.cuboid.surface_area()
            * q.lambda.powf(q.gamma + 0.5 * (df - 1.0))
            * (m.powf(-kappa) + m.powf(1.0 - df))
    }
}

/// Evaluates the Riesz mean of `q` and compares it with the two-term
/// prediction.
///
/// With `coupled` set, a Robin parameter in `q.bc` is relative: the operator
/// uses `β√λ` and the boundary constant is evaluated at `β`. Otherwise the
/// parameter is absolute and the constant is evaluated at `β/√λ`.
pub fn two_term_prediction(q: &SpectralQuery, coupled: bool) -> Result<WeylExpansion> {
    two_term_prediction_with(q, coupled, &RieszOptions::default())
}

/// [`two_term_prediction`] with explicit enumeration settings.
pub fn two_term_prediction_with(q: &SpectralQuery, coupled: bool, opts: &RieszOptions) -> Result<WeylExpansion> {
    q.validate()?;
    let sqrt_l = q.lambda.sqrt();
    let (operator_bc, rel_bc) = if coupled {
        (q.bc.scaled(sqrt_l), q.bc)
    } else {
        (q.bc, q.bc.scaled(1.0 / sqrt_l))
    };
    let value = riesz_mean_with(&SpectralQuery { bc: operator_bc, ..q.clone() }, opts)?.value;
    let d = q.cuboid.dim();
    let df = d as f64;
    let leading = lsc(q.gamma, d)? * q.cuboid.volume() * q.lambda.powf(q.gamma + 0.5 * df);
    let second = if q.gamma == 0.0 {
        0.0
    } else {
        0.25 * l_const_bc(q.gamma, d - 1, rel_bc)?
            * q.cuboid.surface_area()
            * q.lambda.powf(q.gamma + 0.5 * (df - 1.0))
    };
    let remainder = value - leading - second;
    let scale = remainder_scale(q);
    let normalized_remainder = if remainder == 0.0 { 0.0 } else { remainder / scale };
    Ok(WeylExpansion { value, leading, second, remainder, normalized_remainder })
}
