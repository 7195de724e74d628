//! Maximisation of Riesz means over cuboids of unit volume, and maximiser
//! trajectories as the spectral parameter grows.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::lsc;
use crate::error::{Error, Result};
use crate::interval::BoundaryCondition;
use crate::riesz::{riesz_mean, Cuboid, SpectralQuery};
use crate::roots::golden_max;

/// Maximise `Tr(-Δ_R^β - λ)₋^γ` over cuboids `R ⊂ ℝ^d` with `|R| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub gamma: f64,
    pub d: usize,
    pub lambda: f64,
    /// Absolute Robin parameter; `f64::INFINITY` means Dirichlet.
    pub beta: f64,
}

impl OptimizationProblem {
    /// Problem with the Robin parameter `beta_rel · √λ`.
    pub fn coupled(gamma: f64, d: usize, lambda: f64, beta_rel: f64) -> Self {
        Self { gamma, d, lambda, beta: beta_rel * lambda.sqrt() }
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::domain(format!("shape optimisation needs d ≥ 2, got {}", self.d)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!("Riesz order must be non-negative, got {}", self.gamma)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain(format!("spectral parameter must be positive, got {}", self.lambda)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::domain(format!("Robin parameter must be positive, got {}", self.beta)));
        }
        Ok(())
    }

    fn bc(&self) -> BoundaryCondition {
        if self.beta == f64::INFINITY {
            BoundaryCondition::Dirichlet
        } else {
            BoundaryCondition::Robin(self.beta)
        }
    }

    /// Riesz mean of the cuboid with the given sides.
    pub fn evaluate(&self, cuboid: &Cuboid) -> Result<f64> {
        let q = SpectralQuery::new(self.gamma, self.lambda, self.bc(), cuboid.clone())?;
        Ok(riesz_mean(&q)?.value)
    }

    /// `L^sc_{γ,d} λ^{γ+d/2}`, the Weyl term for unit volume.
    pub fn weyl_term(&self) -> Result<f64> {
        Ok(lsc(self.gamma, self.d)? * self.lambda.powf(self.gamma + 0.5 * self.d as f64))
    }

    /// Smallest side the search considers. Thinner sides have a ground state
    /// far above `λ`: about `2β/l` in the Robin regime and `π²/l²` in the
    /// Dirichlet regime.
    fn min_side(&self) -> f64 {
        let robin = self.beta / self.lambda;
        let dirichlet = std::f64::consts::PI / self.lambda.sqrt();
        0.5 * robin.min(dirichlet).min(1.0)
    }
}

/// Search settings for [`maximize_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Points per coordinate scan.
    pub scan_points: usize,
    /// Initial half-width of the coordinate scan, in log-side units.
    pub initial_window: f64,
    /// The search stops once the window is below this.
    pub final_window: f64,
    pub max_sweeps: usize,
    /// Nelder–Mead iterations after the coordinate search.
    pub simplex_iterations: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            scan_points: 9,
            initial_window: 0.5,
            final_window: 1e-7,
            max_sweeps: 200,
            simplex_iterations: 200,
        }
    }
}

/// The best cuboid found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub cuboid: Cuboid,
    pub value: f64,
    /// `value / (L^sc_{γ,d} λ^{γ+d/2})`.
    pub normalized: f64,
    /// `min_i l_i · √λ`.
    pub min_side_wavelengths: f64,
    /// Largest difference between the values reached from different starts.
    pub multistart_spread: f64,
}

/// Free coordinates `y ∈ ℝ^{d-1}`; the last log-side is `-Σ y` so the volume
/// is exactly one.
fn sides_from(y: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = y.iter().map(|v| v.exp()).collect();
    s.push((-y.iter().sum::<f64>()).exp());
    s
}

fn coords_from(sides: &[f64]) -> Vec<f64> {
    // Normalise to unit volume first, then drop the last log-side.
    let mean_log = sides.iter().map(|l| l.ln()).sum::<f64>() / sides.len() as f64;
    sides[..sides.len() - 1].iter().map(|l| l.ln() - mean_log).collect()
}

struct Search<'a> {
    problem: &'a OptimizationProblem,
    log_min: f64,
}

impl Search<'_> {
    fn feasible(&self, y: &[f64]) -> bool {
        let last = -y.iter().sum::<f64>();
        y.iter().chain(std::iter::once(&last)).all(|&v| v >= self.log_min && v <= -self.log_min * (self.problem.d as f64 - 1.0))
    }

    fn value(&self, y: &[f64]) -> f64 {
        if !self.feasible(y) {
            return -1.0;
        }
        match Cuboid::new(sides_from(y)).and_then(|c| self.problem.evaluate(&c)) {
            Ok(v) => v,
            Err(_) => -1.0,
        }
    }

    fn coordinate_ascent(&self, mut y: Vec<f64>, opts: &OptimizerOptions) -> (Vec<f64>, f64) {
        let mut best = self.value(&y);
        let mut window = opts.initial_window;
        let m = opts.scan_points.max(3);
        let mut sweeps = 0;
        while window > opts.final_window && sweeps < opts.max_sweeps {
            sweeps += 1;
            let mut improved = false;
            for j in 0..y.len() {
                let centre = y[j];
                let at = |t: f64| {
                    let mut z = y.clone();
                    z[j] = t;
                    self.value(&z)
                };
                let step = 2.0 * window / (m - 1) as f64;
                let ts: Vec<f64> = (0..m).map(|i| centre - window + step * i as f64).collect();
                let vs: Vec<f64> = ts.iter().map(|&t| at(t)).collect();
                let (ib, &vb) = vs
                    .iter()
                    .enumerate()
                    .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
                let (mut tb, mut vbest) = (ts[ib], vb);
                let a = ts[ib] - step;
                let b = ts[ib] + step;
                let (tg, vg) = golden_max(at, a, b, 1e-3 * step);
                if vg > vbest {
                    tb = tg;
                    vbest = vg;
                }
                if vbest > best {
                    best = vbest;
                    y[j] = tb;
                    improved = true;
                }
            }
            if !improved {
                window *= 0.5;
            }
        }
        (y, best)
    }

    fn nelder_mead(&self, y0: Vec<f64>, f0: f64, scale: f64, iterations: usize) -> (Vec<f64>, f64) {
        let n = y0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(y0.clone(), f0)];
        for i in 0..n {
            let mut y = y0.clone();
            y[i] += scale;
            let v = self.value(&y);
            simplex.push((y, v));
        }
        for _ in 0..iterations {
            // Maximisation: sort descending.
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            let spread = simplex
                .iter()
                .flat_map(|(y, _)| y.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if spread < 1e-9 {
                break;
            }
            let centroid: Vec<f64> = (0..n)
                .map(|k| simplex[..n].iter().map(|(y, _)| y[k]).sum::<f64>() / n as f64)
                .collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
            };
            let refl = along(1.0);
            let fr = self.value(&refl);
            if fr > simplex[0].1 {
                let exp = along(2.0);
                let fe = self.value(&exp);
                simplex[n] = if fe > fr { (exp, fe) } else { (refl, fr) };
            } else if fr > simplex[n - 1].1 {
                simplex[n] = (refl, fr);
            } else {
                let con = along(-0.5);
                let fc = self.value(&con);
                if fc > worst.1 {
                    simplex[n] = (con, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for item in simplex.iter_mut().skip(1) {
                        let y: Vec<f64> = item.0.iter().zip(&best).map(|(a, b)| b + 0.5 * (a - b)).collect();
                        let v = self.value(&y);
                        *item = (y, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        simplex.swap_remove(0)
    }

    fn run(&self, start: &[f64], opts: &OptimizerOptions) -> (Vec<f64>, f64) {
        let (y, v) = self.coordinate_ascent(start.to_vec(), opts);
        if opts.simplex_iterations == 0 {
            return (y, v);
        }
        let (z, w) = self.nelder_mead(y.clone(), v, 1e-3, opts.simplex_iterations);
        if w > v {
            // The simplex moved: polish its result along the coordinates again.
            let polish = OptimizerOptions { initial_window: 1e-3, ..*opts };
            let (p, pv) = self.coordinate_ascent(z.clone(), &polish);
            if pv > w { (p, pv) } else { (z, w) }
        } else {
            (y, v)
        }
    }
}

/// The default multistart palette: the cube, slabs of aspect ratio 2, 4, 8,
/// 16, and slabs whose short side is `c/√λ` for `c = 1, 2, 4`.
pub fn default_starts(d: usize, lambda: f64) -> Vec<Vec<f64>> {
    let slab = |short: f64| -> Vec<f64> {
        let other = short.powf(-1.0 / (d as f64 - 1.0));
        std::iter::once(short).chain(std::iter::repeat(other).take(d - 1)).collect()
    };
    let mut starts = vec![vec![1.0; d]];
    for j in 1..=4 {
        let aspect = 2f64.powi(j);
        starts.push(slab(aspect.powf(-(d as f64 - 1.0) / d as f64)));
    }
    for c in [1.0, 2.0, 4.0] {
        starts.push(slab((c / lambda.sqrt()).min(1.0)));
    }
    starts
}

/// Maximiser over unit-volume cuboids from the default starts.
///
/// ```
/// use robin_spectra::shape::{maximize, OptimizationProblem};
/// let p = OptimizationProblem::coupled(1.0, 2, 400.0, 3.0);
/// let m = maximize(&p).unwrap();
/// assert!((m.cuboid.volume() - 1.0).abs() < 1e-12);
/// assert!(m.value >= p.evaluate(&robin_spectra::riesz::Cuboid::unit_cube(2)).unwrap());
/// ```
pub fn maximize(problem: &OptimizationProblem) -> Result<Maximizer> {
    maximize_with(problem, &[], &OptimizerOptions::default())
}

/// Maximiser from the default starts plus `extra_starts` (side lists, any volume).
pub fn maximize_with(
    problem: &OptimizationProblem,
    extra_starts: &[Vec<f64>],
    opts: &OptimizerOptions,
) -> Result<Maximizer> {
    problem.validate()?;
    let d = problem.d;
    if let Some(bad) = extra_starts.iter().find(|s| s.len() != d || s.iter().any(|l| !(*l > 0.0))) {
        return Err(Error::domain(format!("invalid start {bad:?} for dimension {d}")));
    }
    let cube = Cuboid::unit_cube(d);
    // Surfaces capacity and solver errors instead of silently skipping them.
    let cube_value = problem.evaluate(&cube)?;
    let search = Search { problem, log_min: problem.min_side().ln() };
    let mut starts = default_starts(d, problem.lambda);
    starts.extend(extra_starts.iter().cloned());
    let results: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|s| {
            let mut y = coords_from(s);
            for v in y.iter_mut() {
                *v = v.max(search.log_min);
            }
            search.run(&y, opts)
        })
        .collect();
    let weyl = problem.weyl_term()?;
    let spread = {
        let hi = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let lo = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        hi - lo.max(0.0)
    };
    let mut candidates: Vec<(Cuboid, f64)> = results
        .into_iter()
        .filter(|r| r.1 >= 0.0)
        .filter_map(|(y, v)| Cuboid::new(sides_from(&y)).ok().map(|c| (c, v)))
        .collect();
    candidates.push((cube.clone(), cube_value));
    let best_value = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let (cuboid, value) = if best_value <= 0.0 {
        (cube, 0.0)
    } else {
        let tie = 1e-12 * best_value;
        candidates
            .into_iter()
            .filter(|c| c.1 >= best_value - tie)
            .min_by(|a, b| {
                a.0.sides()
                    .iter()
                    .zip(b.0.sides())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("at least the cube")
    };
    Ok(Maximizer {
        min_side_wavelengths: cuboid.min_side() * problem.lambda.sqrt(),
        normalized: value / weyl,
        cuboid,
        value,
        multistart_spread: spread.max(0.0),
    })
}

/// `M_{γ,d}(λ, β) / (L^sc_{γ,d} λ^{γ+d/2})` together with the maximiser.
pub fn normalized_m(problem: &OptimizationProblem) -> Result<(f64, Maximizer)> {
    let m = maximize(problem)?;
    Ok((m.normalized, m))
}

/// The slab `(0, l) × (0, l^{-1/(d-1)})^{d-1}` with `l = (2+ε) β / λ`, whose
/// normalised Riesz mean blows up when `β/√λ → 0` but `β ≫ 1`.
pub fn trial_slab(d: usize, lambda: f64, beta: f64, epsilon: f64) -> Result<Cuboid> {
    if d < 2 {
        return Err(Error::domain("trial slabs need d ≥ 2"));
    }
    let l = (2.0 + epsilon) * beta / lambda;
    let other = l.powf(-1.0 / (d as f64 - 1.0));
    Cuboid::new(std::iter::once(l).chain(std::iter::repeat(other).take(d - 1)).collect())
}

/// Outcome of [`classify_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConvergesToCube,
    Collapses,
    Undetermined,
}

/// Thresholds for the trajectory verdict. They are finite-λ heuristics for
/// limit statements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryOptions {
    /// Final aspect ratio below which the maximisers count as a cube.
    pub aspect_tol: f64,
    /// Width of the window that `min_side_wavelengths` must stay in.
    pub wavelength_band: f64,
    pub optimizer: OptimizerOptions,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self { aspect_tol: 1.05, wavelength_band: 10.0, optimizer: OptimizerOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryClassification {
    pub lambdas: Vec<f64>,
    pub maximizers: Vec<Maximizer>,
    pub verdict: Verdict,
    /// Aspect ratio of each maximiser.
    pub aspect_trend: Vec<f64>,
    /// `min_side_wavelengths` of each maximiser.
    pub wavelength_trend: Vec<f64>,
}

/// Maximisers along an ascending `λ` grid with `β = beta_rel · √λ`, each warm
/// started from the previous one, and a verdict on their behaviour.
pub fn classify_trajectory(gamma: f64, d: usize, beta_rel: f64, lambdas: &[f64]) -> Result<TrajectoryClassification> {
    classify_trajectory_with(gamma, d, beta_rel, lambdas, &TrajectoryOptions::default())
}

/// [`classify_trajectory`] with explicit thresholds.
pub fn classify_trajectory_with(
    gamma: f64,
    d: usize,
    beta_rel: f64,
    lambdas: &[f64],
    opts: &TrajectoryOptions,
) -> Result<TrajectoryClassification> {
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("trajectory grid must be strictly ascending"));
    }
    let mut maximizers: Vec<Maximizer> = Vec::with_capacity(lambdas.len());
    let mut prev: Option<(f64, Vec<f64>)> = None;
    for &lambda in lambdas {
        let problem = OptimizationProblem::coupled(gamma, d, lambda, beta_rel);
        let mut extra = Vec::new();
        if let Some((pl, sides)) = &prev {
            extra.push(sides.clone());
            // Same shape in wavelength units: the short side shrinks like λ^{-1/2}.
            let short = sides[0] * (pl / lambda).sqrt();
            let other = short.powf(-1.0 / (d as f64 - 1.0));
            extra.push(std::iter::once(short).chain(std::iter::repeat(other).take(d - 1)).collect());
        }
        let m = maximize_with(&problem, &extra, &opts.optimizer)?;
        prev = Some((lambda, m.cuboid.sides().to_vec()));
        maximizers.push(m);
    }
    let aspect_trend: Vec<f64> = maximizers.iter().map(|m| m.cuboid.aspect_ratio()).collect();
    let wavelength_trend: Vec<f64> = maximizers.iter().map(|m| m.min_side_wavelengths).collect();
    let min_sides: Vec<f64> = maximizers.iter().map(|m| m.cuboid.min_side()).collect();
    let verdict = verdict(&aspect_trend, &wavelength_trend, &min_sides, opts);
    Ok(TrajectoryClassification { lambdas: lambdas.to_vec(), maximizers, verdict, aspect_trend, wavelength_trend })
}

fn verdict(aspect: &[f64], wavelengths: &[f64], min_sides: &[f64], opts: &TrajectoryOptions) -> Verdict {
    let n = aspect.len();
    if n < 2 {
        return Verdict::Undetermined;
    }
    // Decreasing until the tolerance band is reached, then staying inside it.
    let settles = aspect.windows(2).all(|w| w[1] <= w[0].max(opts.aspect_tol));
    if settles && aspect[n - 1] < opts.aspect_tol {
        return Verdict::ConvergesToCube;
    }
    let top = &wavelengths[n / 2..];
    let lo = top.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = top.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shrinking = min_sides[n / 2..].windows(2).all(|w| w[1] < w[0]) && min_sides[n - 1] < min_sides[0];
    if hi - lo <= opts.wavelength_band && lo > 0.0 && shrinking && aspect[n - 1] >= opts.aspect_tol {
        return Verdict::Collapses;
    }
    Verdict::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_round_trip_with_unit_volume() {
        let y = coords_from(&[0.5, 2.0, 3.0]);
        let s = sides_from(&y);
        let v: f64 = s.iter().product();
        assert!((v - 1.0).abs() < 1e-14);
        assert!((s[1] / s[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn default_palette_has_eight_unit_volume_starts() {
        let starts = default_starts(3, 1e4);
        assert_eq!(starts.len(), 8);
        for s in &starts {
            assert!((s.iter().product::<f64>() - 1.0).abs() < 1e-12);
        }
        let aspect = |s: &Vec<f64>| s.iter().cloned().fold(0.0, f64::max) / s.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((aspect(&starts[2]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn zero_maximum_returns_unit_cube() {
        // Far below every admissible ground state.
        let p = OptimizationProblem { gamma: 1.0, d: 2, lambda: 1.0, beta: f64::INFINITY };
        let m = maximize(&p).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.cuboid, Cuboid::unit_cube(2));
    }

    #[test]
    fn single_point_grid_is_undetermined() {
        let t = classify_trajectory(1.0, 2, 1.0, &[200.0]).unwrap();
        assert_eq!(t.verdict, Verdict::Undetermined);
    }

    #[test]
    fn rejects_one_dimension() {
        assert!(maximize(&OptimizationProblem { gamma: 1.0, d: 1, lambda: 10.0, beta: 1.0 }).is_err());
    }
}
