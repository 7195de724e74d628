//! Riesz means `Tr(-Δ - λ)₋^γ = Σ_k (λ - λ_k)₊^γ` on intervals and cuboids.
//!
//! For `γ = 0` the mean counts eigenvalues `λ_k ≤ λ`; for `γ > 0` an
//! eigenvalue equal to `λ` contributes nothing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{eigenvalue_with, eigenvalues_below_with, BoundaryCondition, RootOptions};
use crate::quad::{integrate_smoothed, QuadOptions};
use crate::special::beta_fn;
use crate::sum::Accumulator;

/// An axis-parallel box `∏ (0, l_i)`, with sides kept in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cuboid {
    sides: Vec<f64>,
}

impl Cuboid {
    pub fn new(mut sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::domain("a cuboid needs at least one side"));
        }
        if let Some(bad) = sides.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::domain(format!("side lengths must be positive and finite, got {bad}")));
        }
        sides.sort_by(f64::total_cmp);
        Ok(Self { sides })
    }

    /// The interval `(0, length)`.
    pub fn interval(length: f64) -> Result<Self> {
        Self::new(vec![length])
    }

    /// The unit cube in dimension `d`.
    pub fn unit_cube(d: usize) -> Self {
        Self { sides: vec![1.0; d.max(1)] }
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    /// `H^{d-1}(∂R) = 2 Σ_i |R| / l_i`. For an interval this is 2, the number
    /// of endpoints.
    pub fn surface_area(&self) -> f64 {
        let v = self.volume();
        2.0 * self.sides.iter().map(|l| v / l).sum::<f64>()
    }

    pub fn min_side(&self) -> f64 {
        self.sides[0]
    }

    pub fn max_side(&self) -> f64 {
        self.sides[self.sides.len() - 1]
    }

    /// Longest side over shortest side.
    pub fn aspect_ratio(&self) -> f64 {
        self.max_side() / self.min_side()
    }

    /// The same shape scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.sides.iter().map(|l| l * s).collect())
    }
}

/// A Riesz mean to evaluate: order `gamma`, spectral parameter `lambda`,
/// boundary condition and domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralQuery {
    pub gamma: f64,
    pub lambda: f64,
    pub bc: BoundaryCondition,
    pub cuboid: Cuboid,
}

impl SpectralQuery {
    pub fn new(gamma: f64, lambda: f64, bc: BoundaryCondition, cuboid: Cuboid) -> Result<Self> {
        let q = Self { gamma, lambda, bc, cuboid };
        q.validate()?;
        Ok(q)
    }

    /// Query whose Robin parameter scales with the spectral parameter:
    /// `beta_rel` becomes the absolute parameter `beta_rel · √λ`.
    pub fn coupled(gamma: f64, lambda: f64, bc_rel: BoundaryCondition, cuboid: Cuboid) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::domain(format!("spectral parameter must be non-negative, got {lambda}")));
        }
        Self::new(gamma, lambda, bc_rel.scaled(lambda.sqrt()), cuboid)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!("Riesz order must be non-negative, got {}", self.gamma)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain(format!(
                "spectral parameter must be non-negative and finite, got {}",
                self.lambda
            )));
        }
        self.bc.validate()
    }
}

/// Value of a Riesz mean with bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszValue {
    pub value: f64,
    /// Number of eigenvalues that contributed.
    pub terms_counted: u64,
    /// Mass known to be omitted. Exact enumeration always reports 0.
    pub truncation_bound: f64,
}

/// Settings for lattice-point enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszOptions {
    /// Hard limit on the estimated number of lattice points visited.
    pub max_terms: f64,
    pub roots: RootOptions,
}

impl Default for RieszOptions {
    fn default() -> Self {
        Self { max_terms: 1e8, roots: RootOptions::default() }
    }
}

/// Relative slack used when comparing an eigenvalue with `λ` in the counting
/// function, so that ties survive rounding (for example `(πk)²` against `π²k²`).
const TIE_ULPS: f64 = 8.0 * f64::EPSILON;

struct Enumeration {
    gamma: f64,
    /// One ascending eigenvalue list per axis, in recursion order.
    axes: Vec<Vec<f64>>,
    /// `floor[i]` is the sum of the ground states of axes `i..`.
    floor: Vec<f64>,
    slack: f64,
}

#[derive(Default, Clone, Copy)]
struct Partial {
    acc: Accumulator,
    terms: u64,
}

impl Partial {
    fn merge(&mut self, other: Partial) {
        self.acc.merge(other.acc);
        self.terms += other.terms;
    }
}

impl Enumeration {
    fn leaf(&self, remaining: f64, out: &mut Partial) {
        let axis = self.axes.last().expect("at least one axis");
        if self.gamma == 0.0 {
            let n = axis.partition_point(|&e| e <= remaining + self.slack);
            out.acc.add(n as f64);
            out.terms += n as u64;
        } else {
            for &e in axis {
                let gap = remaining - e;
                if gap <= 0.0 {
                    break;
                }
                out.acc.add(gap.powf(self.gamma));
                out.terms += 1;
            }
        }
    }

    fn descend(&self, level: usize, remaining: f64, out: &mut Partial) {
        if level + 1 == self.axes.len() {
            self.leaf(remaining, out);
            return;
        }
        let rest = self.floor[level + 1];
        for &e in &self.axes[level] {
            let r = remaining - e;
            if self.pruned(r - rest) {
                break;
            }
            self.descend(level + 1, r, out);
        }
    }

    fn pruned(&self, headroom: f64) -> bool {
        if self.gamma == 0.0 {
            headroom < -self.slack
        } else {
            headroom <= 0.0
        }
    }

    fn run(&self, lambda: f64) -> Partial {
        if self.axes.len() == 1 {
            let mut p = Partial::default();
            self.leaf(lambda, &mut p);
            return p;
        }
        let rest = self.floor[1];
        let branches: Vec<f64> = self.axes[0]
            .iter()
            .map(|&e| lambda - e)
            .take_while(|&r| !self.pruned(r - rest))
            .collect();
        let parts: Vec<Partial> = branches
            .par_iter()
            .map(|&r| {
                let mut p = Partial::default();
                self.descend(1, r, &mut p);
                p
            })
            .collect();
        let mut total = Partial::default();
        for p in parts {
            total.merge(p);
        }
        total
    }
}

fn build(q: &SpectralQuery, order: &[usize], opts: &RieszOptions) -> Result<Option<Enumeration>> {
    q.validate()?;
    let sides = q.cuboid.sides();
    let slack = TIE_ULPS * q.lambda.max(f64::MIN_POSITIVE);
    let limit = q.lambda + slack;
    // Ground states bound the budget left for each axis.
    let mut ground = Vec::with_capacity(sides.len());
    for &l in sides {
        ground.push(eigenvalue_with(1, q.bc, l, &opts.roots)?.value);
    }
    let total_ground: f64 = ground.iter().sum();
    if total_ground > limit {
        return Ok(None);
    }
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(sides.len());
    let mut cache: Vec<(f64, f64, usize)> = Vec::new();
    let mut estimate = 1.0f64;
    for &i in order {
        let budget = limit - (total_ground - ground[i]);
        let l = sides[i];
        let reuse = cache.iter().find(|(cl, cb, _)| *cl == l && *cb == budget).map(|c| c.2);
        let list = match reuse {
            Some(j) => axes[j].clone(),
            None => {
                let n_bound = crate::interval::count_bound(l, budget) as f64;
                if estimate * n_bound > opts.max_terms {
                    return Err(Error::Capacity { estimate: estimate * n_bound, limit: opts.max_terms });
                }
                eigenvalues_below_with(q.bc, l, budget, &opts.roots)?
            }
        };
        estimate *= list.len() as f64;
        if estimate > opts.max_terms {
            return Err(Error::Capacity { estimate, limit: opts.max_terms });
        }
        cache.push((l, budget, axes.len()));
        axes.push(list);
    }
    let mut floor = vec![0.0; axes.len() + 1];
    for i in (0..axes.len()).rev() {
        floor[i] = floor[i + 1] + axes[i][0];
    }
    Ok(Some(Enumeration { gamma: q.gamma, axes, floor, slack }))
}

fn evaluate(q: &SpectralQuery, order: &[usize], opts: &RieszOptions) -> Result<RieszValue> {
    let value = match build(q, order, opts)? {
        None => RieszValue { value: 0.0, terms_counted: 0, truncation_bound: 0.0 },
        Some(en) => {
            let p = en.run(q.lambda);
            RieszValue { value: p.acc.value(), terms_counted: p.terms, truncation_bound: 0.0 }
        }
    };
    Ok(value)
}

/// Riesz mean on an interval. Fails if the query's domain is not one-dimensional.
///
/// ```
/// use robin_spectra::riesz::{riesz_mean_interval, Cuboid, SpectralQuery};
/// use robin_spectra::BoundaryCondition;
/// use std::f64::consts::PI;
///
/// let q = SpectralQuery::new(1.0, 2.0 * PI * PI, BoundaryCondition::Dirichlet,
///                            Cuboid::interval(1.0).unwrap()).unwrap();
/// let r = riesz_mean_interval(&q).unwrap();
/// assert!((r.value - PI * PI).abs() < 1e-12);
/// assert_eq!(r.terms_counted, 1);
/// ```
pub fn riesz_mean_interval(q: &SpectralQuery) -> Result<RieszValue> {
    if q.cuboid.dim() != 1 {
        return Err(Error::domain(format!("expected an interval, got dimension {}", q.cuboid.dim())));
    }
    riesz_mean(q)
}

/// Riesz mean on a cuboid of any dimension, by recursion over the sides
/// starting with the shortest.
pub fn riesz_mean(q: &SpectralQuery) -> Result<RieszValue> {
    riesz_mean_with(q, &RieszOptions::default())
}

/// [`riesz_mean`] with explicit enumeration settings.
pub fn riesz_mean_with(q: &SpectralQuery, opts: &RieszOptions) -> Result<RieszValue> {
    let order: Vec<usize> = (0..q.cuboid.dim()).collect();
    evaluate(q, &order, opts)
}

/// Riesz mean with the recursion starting from side `first` (index into the
/// ascending side list). Every choice gives the same value up to rounding.
pub fn riesz_mean_from_axis(q: &SpectralQuery, first: usize, opts: &RieszOptions) -> Result<RieszValue> {
    let d = q.cuboid.dim();
    if first >= d {
        return Err(Error::domain(format!("axis {first} out of range for dimension {d}")));
    }
    let order: Vec<usize> = std::iter::once(first).chain((0..d).filter(|&i| i != first)).collect();
    evaluate(q, &order, opts)
}

/// All eigenvalues `≤ lambda` of the cuboid, with multiplicity, ascending.
pub fn cuboid_eigenvalues_below(
    bc: BoundaryCondition,
    cuboid: &Cuboid,
    lambda: f64,
    opts: &RieszOptions,
) -> Result<Vec<f64>> {
    let q = SpectralQuery::new(0.0, lambda, bc, cuboid.clone())?;
    let order: Vec<usize> = (0..cuboid.dim()).collect();
    let Some(en) = build(&q, &order, opts)? else {
        return Ok(Vec::new());
    };
    fn walk(en: &Enumeration, level: usize, partial: f64, lambda: f64, out: &mut Vec<f64>) {
        let rest = en.floor[level + 1];
        for &e in &en.axes[level] {
            let s = partial + e;
            if s + rest > lambda + en.slack {
                break;
            }
            if level + 1 == en.axes.len() {
                out.push(s);
            } else {
                walk(en, level + 1, s, lambda, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(&en, 0, 0.0, lambda, &mut out);
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Upper bound `3^{d-1} |R| λ^{γ+d/2} (1 + (min_i l_i √λ)^{-d})` for the Riesz mean.
pub fn apriori_bound(q: &SpectralQuery) -> f64 {
    let d = q.cuboid.dim() as f64;
    let c = 3f64.powf(d - 1.0);
    let lam = q.lambda.max(0.0);
    // Expanded so that λ = 0 does not produce 0·∞.
    let main = lam.powf(q.gamma + 0.5 * d);
    let small = lam.powf(q.gamma) * q.cuboid.min_side().powf(-d);
    c * q.cuboid.volume() * (main + small)
}

/// Both sides of the lifting identity
/// `Tr(H-λ)₋^{γ'} = B(1+γ, γ'-γ)⁻¹ ∫₀^λ (λ-τ)^{γ'-γ-1} Tr(H-τ)₋^γ dτ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    pub lifted: f64,
    pub direct: f64,
}

impl Lift {
    pub fn relative_gap(&self) -> f64 {
        if self.direct == 0.0 {
            self.lifted.abs()
        } else {
            ((self.lifted - self.direct) / self.direct).abs()
        }
    }
}

/// Evaluates the order-`gamma_prime` Riesz mean twice: by integrating the
/// order-`q.gamma` mean against `(λ-τ)^{γ'-γ-1}`, and by direct enumeration.
///
/// With `coupled` set, a Robin parameter in `q.bc` is read as relative and
/// the absolute parameter `β√λ` (at the outer `λ`) is held fixed while `τ`
/// varies.
pub fn aizenman_lieb_lift(gamma_prime: f64, q: &SpectralQuery, coupled: bool) -> Result<Lift> {
    q.validate()?;
    let gamma = q.gamma;
    if !(gamma_prime > gamma) || !gamma_prime.is_finite() {
        return Err(Error::domain(format!("need γ' > γ, got γ = {gamma}, γ' = {gamma_prime}")));
    }
    let bc = if coupled { q.bc.scaled(q.lambda.sqrt()) } else { q.bc };
    let opts = RieszOptions::default();
    let eigs = cuboid_eigenvalues_below(bc, &q.cuboid, q.lambda, &opts)?;
    let direct = riesz_mean(&SpectralQuery { gamma: gamma_prime, bc, ..q.clone() })?.value;
    if eigs.is_empty() {
        return Ok(Lift { lifted: 0.0, direct });
    }
    let a = gamma_prime - gamma;
    let lambda = q.lambda;
    let mean_at = |tau: f64| -> f64 {
        let mut acc = Accumulator::new();
        for &e in &eigs {
            if gamma == 0.0 {
                if e <= tau {
                    acc.add(1.0);
                } else {
                    break;
                }
            } else if e < tau {
                acc.add((tau - e).powf(gamma));
            } else {
                break;
            }
        }
        acc.value()
    };
    // Panels between consecutive distinct eigenvalues: the integrand is smooth
    // inside each, with power-type behaviour at the ends.
    let mut knots: Vec<f64> = eigs.clone();
    knots.dedup();
    knots.push(lambda);
    let quad = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 2000 };
    let mut total = Accumulator::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let r = integrate_smoothed(|t| (lambda - t).powf(a - 1.0) * mean_at(t), lo, hi, &quad)?;
        total.add(r.value);
    }
    let lifted = total.value() / beta_fn(1.0 + gamma, a);
    Ok(Lift { lifted, direct })
}
