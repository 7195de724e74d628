//! Thresholds for the one-dimensional Berezin-type inequality with a Robin
//! parameter proportional to `√λ`.
//!
//! Everything here lives on the unit interval with Robin parameter `β√λ`,
//! recomputed at every sample. `β = ∞` selects the Dirichlet interval.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{l_const, lsc, ThresholdResult};
use crate::error::{Error, Result};
use crate::interval::{eigenvalues_below_with, BoundaryCondition, RootOptions};
use crate::quad::{integrate, QuadOptions};
use crate::special::ln_gamma;
use num_complex::Complex64;
use crate::roots::{golden_max, golden_min};
use crate::sum::Accumulator;

/// One evaluation of the deficit and oscillation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeficitSample {
    pub lambda: f64,
    /// `λ^{-γ} (L^sc_{γ,1} λ^{γ+1/2} - Tr(-Δ^{β√λ}_{(0,1)} - λ)₋^γ)`.
    pub deficit: f64,
    /// `λ^{-γ/2} (L^sc_{γ,1} λ^{γ+1/2} + ½ L_{γ,0}(β) λ^γ - Tr(-Δ^{β√λ}_{(0,1)} - λ)₋^γ)`.
    pub oscillation: f64,
}

/// Settings for the band scans and threshold bisections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSearch {
    /// Grid points per band before refinement.
    pub grid_points: usize,
    /// Golden-section refinement stops at this fraction of the band width.
    pub refine_rel_width: f64,
    /// Bracket width at which the bisection over `β` stops.
    pub beta_tol: f64,
    /// How many times the initial `β` bracket may be doubled or halved.
    pub expansion_cap: usize,
    pub roots: RootOptions,
}

impl Default for BandSearch {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            refine_rel_width: 1e-10,
            beta_tol: 1e-8,
            expansion_cap: 80,
            roots: RootOptions::default(),
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else if gamma == 0.0 {
        Err(Error::domain(
            "γ = 0 is excluded: the counting function has no Berezin-type bound on the interval",
        ))
    } else {
        Err(Error::domain(format!("Riesz order must be positive and finite, got {gamma}")))
    }
}

fn coupled_bc(beta: f64, lambda: f64) -> Result<BoundaryCondition> {
    if beta == f64::INFINITY {
        Ok(BoundaryCondition::Dirichlet)
    } else {
        BoundaryCondition::robin(beta * lambda.sqrt())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && !beta.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("Robin parameter must be positive, got {beta}")))
    }
}

/// `Tr(-Δ^{β√λ}_{(0,1)} - λ)₋^γ`.
pub fn coupled_riesz_mean(gamma: f64, beta: f64, lambda: f64, roots: &RootOptions) -> Result<f64> {
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    let eigs = eigenvalues_below_with(coupled_bc(beta, lambda)?, 1.0, lambda, roots)?;
    let mut acc = Accumulator::new();
    for e in eigs {
        if gamma == 0.0 {
            acc.add(1.0);
        } else if e < lambda {
            acc.add((lambda - e).powf(gamma));
        }
    }
    Ok(acc.value())
}

/// Precomputed constants for a fixed `(γ, β)`.
#[derive(Debug, Clone, Copy)]
struct Coupled {
    gamma: f64,
    beta: f64,
    lsc1: f64,
    roots: RootOptions,
}

impl Coupled {
    fn new(gamma: f64, beta: f64, roots: RootOptions) -> Result<Self> {
        check_gamma(gamma)?;
        check_beta(beta)?;
        Ok(Self { gamma, beta, lsc1: lsc(gamma, 1)?, roots })
    }

    fn deficit(&self, lambda: f64) -> Result<f64> {
        let tr = coupled_riesz_mean(self.gamma, self.beta, lambda, &self.roots)?;
        Ok(self.lsc1 * lambda.sqrt() - tr * lambda.powf(-self.gamma))
    }
}

/// Deficit and oscillation at one spectral parameter.
///
/// ```
/// use robin_spectra::thresholds::deficit;
/// // Dirichlet interval: the Berezin inequality holds strictly.
/// let s = deficit(1.0, f64::INFINITY, 500.0).unwrap();
/// assert!(s.deficit > 0.0);
/// ```
pub fn deficit(gamma: f64, beta: f64, lambda: f64) -> Result<DeficitSample> {
    let l0 = l_const(gamma, 0, beta)?;
    deficit_with(gamma, beta, lambda, l0, &RootOptions::default())
}

fn deficit_with(gamma: f64, beta: f64, lambda: f64, l0: f64, roots: &RootOptions) -> Result<DeficitSample> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("spectral parameter must be positive, got {lambda}")));
    }
    let c = Coupled::new(gamma, beta, *roots)?;
    let tr = coupled_riesz_mean(gamma, beta, lambda, roots)?;
    let weyl = c.lsc1 * lambda.powf(gamma + 0.5);
    let deficit = (weyl - tr) * lambda.powf(-gamma);
    // The direct difference loses about ε·L^sc·λ^{(γ+1)/2} to cancellation.
    let direct_error = 16.0 * f64::EPSILON * c.lsc1 * lambda.powf(0.5 * (gamma + 1.0));
    let oscillation = if direct_error > DIRECT_OSCILLATION_TOL && gamma >= SERIES_MIN_ORDER {
        oscillation_series(gamma, beta, lambda)?
    } else {
        (weyl + 0.5 * l0 * lambda.powf(gamma) - tr) * lambda.powf(-0.5 * gamma)
    };
    Ok(DeficitSample { lambda, deficit, oscillation })
}

/// Rounding error above which the oscillation switches to [`oscillation_series`].
const DIRECT_OSCILLATION_TOL: f64 = 1e-9;
/// Below this order the series needs too many terms; the direct difference
/// then loses at most about 1e-6 for λ ≤ 10⁶.
const SERIES_MIN_ORDER: f64 = 3.0;
/// Truncation error of the series, relative to `max(|value|, 1)`.
const SERIES_TOL: f64 = 1e-12;

/// The oscillation `λ^{-γ/2}(L^sc λ^{γ+1/2} + ½L_{γ,0}(β)λ^γ - Tr)` without
/// forming the trace.
///
/// With `b = β√λ` the map `φ(s) = (s + 2 atan(s/b))/π` sends `√λ_k` to `k`,
/// so Poisson summation of `k ↦ (λ - φ⁻¹(k)²)₊^γ` reproduces the two Weyl
/// terms from the zero mode and leaves
/// `Tr - L^sc λ^{γ+1/2} - ½L_{γ,0}(β)λ^γ = Σ_{m≥1} ĥ(m)` with
/// `ĥ(m) = ∫_{-√λ}^{√λ} (λ-s²)^γ e^{-2πimφ(s)} φ'(s) ds`.
/// The integrand is analytic in the lower half plane (the pole of `φ'` at
/// `-ib` is cancelled by a zero of `e^{-2πimφ}`), so each coefficient is
/// `-2 ∫₀^∞ Im F(√λ - it) dt`, an integral with no cancellation.
///
/// Needs `γ > 0`. The series decays like `m^{-1-γ}`, so orders below about 2
/// exhaust the term limit and return a convergence error.
pub fn oscillation_series(gamma: f64, beta: f64, lambda: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("the Poisson series needs γ > 0, got {gamma}")));
    }
    check_beta(beta)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("spectral parameter must be positive, got {lambda}")));
    }
    let r = lambda.sqrt();
    let b = beta * r;
    // |ĥ(m)| λ^{-γ/2} is at most about 3Γ(1+γ)/(π m^{1+γ}); the tail bound
    // below fixes the number of terms in advance.
    let scale = 3.0 * ln_gamma(1.0 + gamma).exp() / PI;
    let opts = QuadOptions { abs_tol: 1e-16 * scale, rel_tol: 1e-13, max_panels: 2000 };
    let max_terms = 100_000usize;
    let mut acc = Accumulator::new();
    for m in 1..=max_terms {
        let mf = m as f64;
        // Pre-scaled by λ^{-γ/2}: (λ - s²)^γ / λ^{γ/2} = (t (t/r + 2i))^γ.
        let f = |t: f64| -> f64 {
            let s = Complex64::new(r, -t);
            let base = Complex64::new(t * t / r, 2.0 * t).powf(gamma);
            let phase = (Complex64::new(0.0, -2.0 * mf) * s).exp();
            let (ratio, dphi) = if b == f64::INFINITY {
                (Complex64::new(1.0, 0.0), Complex64::new(1.0 / PI, 0.0))
            } else {
                let i = Complex64::i();
                let q = (b - i * s) / (b + i * s);
                (q.powi(2 * m as i32), (1.0 + 2.0 * b / (b * b + s * s)) / PI)
            };
            -2.0 * (base * phase * ratio * dphi).im
        };
        let t_max = (4.0 * gamma + 80.0) / (2.0 * mf);
        acc.add(series_term(&f, t_max, &opts)?);
        let tail = scale / (gamma * mf.powf(gamma));
        if tail <= SERIES_TOL * acc.value().abs().max(1.0) {
            return Ok(-acc.value());
        }
    }
    Err(Error::Convergence { iterations: max_terms, lo: -acc.value(), hi: -acc.value() })
}

/// One Poisson coefficient. At large order and small `λ` the integrand can
/// exceed its integral by many digits, so when the absolute target is below
/// the rounding floor it is raised to a few ulps of `∫|f|`.
fn series_term<F: Fn(f64) -> f64>(f: &F, t_max: f64, opts: &QuadOptions) -> Result<f64> {
    match integrate(f, 0.0, t_max, opts) {
        Ok(q) => Ok(q.value),
        Err(Error::Quadrature { .. }) => {
            let coarse = QuadOptions { abs_tol: 0.0, rel_tol: 1e-3, max_panels: opts.max_panels };
            let mass = integrate(|t| f(t).abs(), 0.0, t_max, &coarse)?.value;
            let floor = QuadOptions { abs_tol: opts.abs_tol.max(64.0 * f64::EPSILON * mass), ..*opts };
            Ok(integrate(f, 0.0, t_max, &floor)?.value)
        }
        Err(e) => Err(e),
    }
}

/// Deficit and oscillation on a grid of spectral parameters, evaluated in parallel.
pub fn deficit_profile(gamma: f64, beta: f64, lambdas: &[f64]) -> Result<Vec<DeficitSample>> {
    check_gamma(gamma)?;
    check_beta(beta)?;
    let l0 = l_const(gamma, 0, beta)?;
    let roots = RootOptions::default();
    lambdas.par_iter().map(|&l| deficit_with(gamma, beta, l, l0, &roots)).collect()
}

/// Minimum of the deficit over one band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandMinimum {
    pub worst_lambda: f64,
    pub value: f64,
}

/// The `k`-th band `(π²(k-1)², π²k²]`.
pub fn band(k: usize) -> (f64, f64) {
    let kf = k as f64;
    ((PI * (kf - 1.0)).powi(2), (PI * kf).powi(2))
}

/// Grid for band `k`, log-spaced, excluding the left end and including the right.
fn band_grid(k: usize, n: usize) -> Vec<f64> {
    let (lo, hi) = band(k);
    // The first band starts at 0; the deficit there is ≥ 0 until the first
    // eigenvalue crosses λ, so eight decades below π² are enough.
    let lo = if k == 1 { hi * 1e-8 } else { lo };
    let ratio = (hi / lo).ln();
    let mut g: Vec<f64> = (1..=n).map(|i| lo * (ratio * i as f64 / n as f64).exp()).collect();
    g[n - 1] = hi;
    g
}

/// Global minimum of `λ ↦ deficit` over band `k`: dense scan, then golden
/// section around every local minimum of the scan (the right endpoint counts).
pub fn band_min_deficit(gamma: f64, beta: f64, k: usize) -> Result<BandMinimum> {
    band_min_deficit_with(gamma, beta, k, &BandSearch::default())
}

/// [`band_min_deficit`] with explicit settings.
pub fn band_min_deficit_with(gamma: f64, beta: f64, k: usize, search: &BandSearch) -> Result<BandMinimum> {
    if k == 0 {
        return Err(Error::domain("band index k starts at 1"));
    }
    if search.grid_points < 3 {
        return Err(Error::domain("band scan needs at least 3 grid points"));
    }
    let c = Coupled::new(gamma, beta, search.roots)?;
    let grid = band_grid(k, search.grid_points);
    let values: Vec<f64> = grid.par_iter().map(|&l| c.deficit(l)).collect::<Result<_>>()?;
    let n = grid.len();
    let (blo, bhi) = band(k);
    let width_tol = search.refine_rel_width * (bhi - blo);
    let mut best = BandMinimum { worst_lambda: grid[n - 1], value: values[n - 1] };
    let mut candidates = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || values[i] <= values[i - 1];
        let right_ok = i + 1 == n || values[i] <= values[i + 1];
        if left_ok && right_ok {
            candidates.push(i);
        }
    }
    let refined: Vec<BandMinimum> = candidates
        .par_iter()
        .map(|&i| {
            let a = if i == 0 { if k == 1 { 0.5 * grid[0] } else { blo } } else { grid[i - 1] };
            let b = if i + 1 == n { grid[i] } else { grid[i + 1] };
            let (x, v) = golden_min(|l| c.deficit(l).unwrap_or(f64::INFINITY), a, b, width_tol);
            if v < values[i] {
                BandMinimum { worst_lambda: x, value: v }
            } else {
                BandMinimum { worst_lambda: grid[i], value: values[i] }
            }
        })
        .collect();
    for r in refined {
        if r.value < best.value {
            best = r;
        }
    }
    Ok(best)
}

/// The band threshold `β^(k)(γ)`: the smallest `β` with a non-negative
/// deficit on the whole band `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandThreshold {
    pub k: usize,
    pub beta_k: f64,
    pub bracket: (f64, f64),
    pub worst_lambda: f64,
    pub deficit_at_worst: f64,
}

/// `β^(k)(γ)` by bisection on the sign of the band minimum, which is
/// nondecreasing in `β`.
pub fn beta_k(gamma: f64, k: usize) -> Result<BandThreshold> {
    beta_k_with(gamma, k, &BandSearch::default())
}

/// [`beta_k`] with explicit settings.
pub fn beta_k_with(gamma: f64, k: usize, search: &BandSearch) -> Result<BandThreshold> {
    check_gamma(gamma)?;
    let min_at = |b: f64| band_min_deficit_with(gamma, b, k, search);
    let (mut lo, mut hi) = (0.25, 1.0);
    let mut m_hi = min_at(hi)?;
    let mut steps = 0;
    while m_hi.value < 0.0 {
        lo = hi;
        hi *= 2.0;
        m_hi = min_at(hi)?;
        steps += 1;
        if steps > search.expansion_cap {
            return Err(Error::Convergence { iterations: steps, lo, hi });
        }
    }
    let mut m_lo = min_at(lo)?;
    steps = 0;
    while m_lo.value >= 0.0 {
        hi = lo;
        m_hi = m_lo;
        lo *= 0.5;
        m_lo = min_at(lo)?;
        steps += 1;
        if steps > search.expansion_cap {
            // Non-negative down to a vanishing parameter: the infimum is 0.
            return Ok(BandThreshold {
                k,
                beta_k: 0.0,
                bracket: (0.0, hi),
                worst_lambda: m_hi.worst_lambda,
                deficit_at_worst: m_hi.value,
            });
        }
    }
    while hi - lo > search.beta_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let m = min_at(mid)?;
        if m.value >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let at = min_at(beta)?;
    Ok(BandThreshold {
        k,
        beta_k: beta,
        bracket: (lo, hi),
        worst_lambda: at.worst_lambda,
        deficit_at_worst: at.value,
    })
}

/// All band thresholds `β^(1..=k_max)(γ)`.
pub fn band_thresholds(gamma: f64, k_max: usize, search: &BandSearch) -> Result<Vec<BandThreshold>> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    (1..=k_max).into_par_iter().map(|k| beta_k_with(gamma, k, search)).collect()
}

/// `max_{k ≤ k_max} β^(k)(γ)`, a lower bound for the critical parameter
/// `β(γ,1) = sup_k β^(k)(γ)`. The attaining band is reported.
pub fn beta_critical_1(gamma: f64, k_max: usize) -> Result<ThresholdResult> {
    beta_critical_1_with(gamma, k_max, &BandSearch::default())
}

/// [`beta_critical_1`] with explicit settings.
pub fn beta_critical_1_with(gamma: f64, k_max: usize, search: &BandSearch) -> Result<ThresholdResult> {
    let all = band_thresholds(gamma, k_max, search)?;
    let best = all
        .iter()
        .fold(None::<&BandThreshold>, |acc, t| match acc {
            Some(a) if a.beta_k >= t.beta_k => Some(a),
            _ => Some(t),
        })
        .expect("k_max ≥ 1");
    Ok(ThresholdResult {
        value: best.beta_k,
        bracket: best.bracket,
        attaining: Some(best.k as f64),
        tolerance: search.beta_tol,
        lower_bound_only: true,
    })
}

/// Interval estimate `β(γ + (d-1)/2, 1) ≤ β(γ, d) ≤ β(γ, 1)` for the critical
/// parameter of `d`-dimensional cuboids, from one-dimensional thresholds.
/// Both ends inherit the truncation at `k_max` bands.
pub fn beta_critical_bounds(gamma: f64, d: usize, k_max: usize) -> Result<(ThresholdResult, ThresholdResult)> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let lower = beta_critical_1(gamma + 0.5 * (d as f64 - 1.0), k_max)?;
    let upper = beta_critical_1(gamma, k_max)?;
    Ok((lower, upper))
}

/// Lower bound for `r_{γ,1}(β) = sup_λ Tr(-Δ^{β√λ}_{(0,1)} - λ)₋^γ / (L^sc_{γ,1} λ^{γ+1/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcessRatio {
    /// `max(1, grid_sup)`: the ratio tends to 1 as `λ → ∞`, so 1 is always a
    /// valid lower bound.
    pub value: f64,
    /// Largest ratio found on the refined grid.
    pub grid_sup: f64,
    /// Where `grid_sup` is attained; `None` when the grid never exceeds 1 and
    /// the supremum is only approached as `λ → ∞`.
    pub attaining_lambda: Option<f64>,
}

/// [`ExcessRatio`] over `(0, lambda_max]`, scanning a grid uniform in `√λ`
/// (spacing at most π/64, at least 4096 points) with golden-section refinement
/// around local maxima.
pub fn r_excess_1d(gamma: f64, beta: f64, lambda_max: f64) -> Result<ExcessRatio> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("Riesz order must be non-negative, got {gamma}")));
    }
    check_beta(beta)?;
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::domain(format!("λ_max must be positive, got {lambda_max}")));
    }
    let roots = RootOptions::default();
    let norm = lsc(gamma, 1)?;
    let ratio = |l: f64| -> f64 {
        match coupled_riesz_mean(gamma, beta, l, &roots) {
            Ok(t) => t / (norm * l.powf(gamma + 0.5)),
            Err(_) => f64::NAN,
        }
    };
    let top = lambda_max.sqrt();
    let n = ((top / (PI / 64.0)).ceil() as usize).max(4096);
    let h = top / n as f64;
    let grid: Vec<f64> = (1..=n).map(|i| (h * i as f64).powi(2)).collect();
    let values: Vec<f64> = grid.par_iter().map(|&l| ratio(l)).collect();
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::domain(format!("ratio evaluation failed at λ = {}", grid[i])));
    }
    let mut candidates = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i + 1 == n || values[i] >= values[i + 1];
        if left_ok && right_ok && values[i] > 0.0 {
            candidates.push(i);
        }
    }
    let refined: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&i| {
            let a = if i == 0 { 0.0 } else { h * i as f64 };
            let b = h * (i + 2).min(n) as f64;
            let (s, v) = golden_max(|s| ratio(s * s), a.max(1e-3 * h), b, 1e-10 * h);
            if v > values[i] { (s * s, v) } else { (grid[i], values[i]) }
        })
        .collect();
    let (mut arg, mut sup) = (grid[n - 1], values[n - 1]);
    for (l, v) in refined {
        if v > sup {
            sup = v;
            arg = l;
        }
    }
    Ok(ExcessRatio {
        value: sup.max(1.0),
        grid_sup: sup,
        attaining_lambda: if sup > 1.0 { Some(arg) } else { None },
    })
}

/// Oscillation samples with simple periodicity statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    pub samples: Vec<DeficitSample>,
    /// Period in `√λ` estimated from the autocorrelation, when the grid is
    /// uniform in `√λ` and a repeat is visible.
    pub period: Option<f64>,
    /// Mean of the oscillation over the last estimated period.
    pub last_period_mean: Option<f64>,
    pub min: f64,
    pub max: f64,
}

/// A grid of `n` points uniform in `√λ` on `[sqrt_lo, sqrt_hi]`, returned as `λ` values.
pub fn sqrt_uniform_grid(sqrt_lo: f64, sqrt_hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![sqrt_lo * sqrt_lo];
    }
    let h = (sqrt_hi - sqrt_lo) / (n - 1) as f64;
    (0..n).map(|i| (sqrt_lo + h * i as f64).powi(2)).collect()
}

/// Samples the oscillation on `lambdas` and estimates its period in `√λ`.
pub fn oscillation_profile(gamma: f64, beta: f64, lambdas: &[f64]) -> Result<OscillationProfile> {
    let samples = deficit_profile(gamma, beta, lambdas)?;
    let osc: Vec<f64> = samples.iter().map(|s| s.oscillation).collect();
    let min = osc.iter().copied().fold(f64::INFINITY, f64::min);
    let max = osc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let roots: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let period = uniform_step(&roots).and_then(|h| autocorrelation_period(&osc).map(|lag| lag * h));
    let last_period_mean = period.and_then(|p| {
        let end = *roots.last()?;
        let tail: Vec<f64> = roots
            .iter()
            .zip(&osc)
            .filter(|(s, _)| **s >= end - p)
            .map(|(_, v)| *v)
            .collect();
        (tail.len() > 1).then(|| crate::sum::sum(tail.iter().copied()) / tail.len() as f64)
    });
    Ok(OscillationProfile { samples, period, last_period_mean, min, max })
}

fn uniform_step(xs: &[f64]) -> Option<f64> {
    if xs.len() < 8 {
        return None;
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let uniform = xs.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-6 * h.abs());
    (uniform && h > 0.0).then_some(h)
}

/// Lag (in samples, fractional) of the first autocorrelation peak after the
/// first zero crossing.
pub fn autocorrelation_period(x: &[f64]) -> Option<f64> {
    let n = x.len();
    let mean = crate::sum::sum(x.iter().copied()) / n as f64;
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let max_lag = n / 2;
    let r: Vec<f64> = (0..=max_lag)
        .map(|m| crate::sum::sum((0..n - m).map(|i| c[i] * c[i + m])) / (n - m) as f64)
        .collect();
    if r[0] <= 0.0 {
        return None;
    }
    let first_negative = (1..=max_lag).find(|&m| r[m] < 0.0)?;
    let peak = (first_negative + 1..max_lag).find(|&m| r[m] >= r[m - 1] && r[m] >= r[m + 1] && r[m] > 0.0)?;
    // Parabolic interpolation through the three samples around the peak.
    let (a, b, cc) = (r[peak - 1], r[peak], r[peak + 1]);
    let denom = a - 2.0 * b + cc;
    let shift = if denom != 0.0 { 0.5 * (a - cc) / denom } else { 0.0 };
    Some(peak as f64 + shift)
}
