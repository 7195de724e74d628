//! One function per sweep subcommand. Each expands its grids into cells,
//! evaluates the cells in parallel and returns the rows in grid order.

use rayon::prelude::*;

use robin_spectra::constants::{beta_w_for_exponent, l_const, l_const_arctan, lsc, two_term_prediction_with, BETA_W_TOL};
use robin_spectra::interval::{arctan_bracket, eigenvalue_with, BoundaryCondition, RootOptions};
use robin_spectra::riesz::{Cuboid, RieszOptions, SpectralQuery};
use robin_spectra::shape::{
    classify_trajectory_with, maximize_with, Maximizer, OptimizationProblem, OptimizerOptions, TrajectoryOptions,
};
use robin_spectra::thresholds::{autocorrelation_period, beta_k_with, deficit as deficit_sample, r_excess_1d, BandSearch};

use crate::grid::Grid;
use crate::table::{Manifest, Row, Table, Value};
use crate::{Settings, Tolerances, UsageError};

type Output = Result<(Manifest, Table), UsageError>;

fn required<'a>(g: &'a Option<Grid>, name: &str) -> Result<&'a Grid, UsageError> {
    g.as_ref().ok_or_else(|| UsageError(format!("missing --{name} (or grid.{name} in the config file)")))
}

fn or_default(g: &Option<Grid>, default: &str) -> Grid {
    g.clone().unwrap_or_else(|| Grid::parse(default).expect("valid default grid"))
}

fn single(g: &Grid, name: &str) -> Result<f64, UsageError> {
    match g.values[..] {
        [v] => Ok(v),
        _ => Err(UsageError(format!("--{name} takes a single value here, got `{}`", g.source))),
    }
}

fn integers(g: &Grid, name: &str) -> Result<Vec<usize>, UsageError> {
    g.integers(name).map_err(|e| UsageError(format!("--{name}: {e}")))
}

fn show(v: Option<f64>) -> String {
    v.map_or("default".into(), |x| format!("{x:?}"))
}

fn settings_lines(s: &Settings) -> Vec<(&'static str, String)> {
    let t = &s.tol;
    vec![
        ("coupled", s.coupled.to_string()),
        ("tol.root", show(t.root)),
        ("tol.beta", show(t.beta)),
        ("tol.shape", show(t.shape)),
        ("tol.aspect", show(t.aspect)),
        ("max_terms", show(t.max_terms)),
    ]
}

fn manifest(command: &str, s: &Settings, grids: &[(&'static str, &Grid)]) -> Manifest {
    Manifest {
        command: command.to_string(),
        grids: grids.iter().map(|(n, g)| (*n, g.source.clone())).collect(),
        settings: settings_lines(s),
    }
}

fn root_options(t: &Tolerances) -> RootOptions {
    let mut o = RootOptions::default();
    if let Some(r) = t.root {
        o.rel_tol = r;
    }
    o
}

fn riesz_options(t: &Tolerances) -> RieszOptions {
    let mut o = RieszOptions { roots: root_options(t), ..RieszOptions::default() };
    if let Some(m) = t.max_terms {
        o.max_terms = m;
    }
    o
}

fn band_search(t: &Tolerances) -> BandSearch {
    let mut b = BandSearch { roots: root_options(t), ..BandSearch::default() };
    if let Some(w) = t.beta {
        b.beta_tol = w;
    }
    b
}

fn optimizer_options(t: &Tolerances) -> OptimizerOptions {
    let mut o = OptimizerOptions::default();
    if let Some(w) = t.shape {
        o.final_window = w;
    }
    o
}

/// Evaluates `f` on every cell in parallel; rows come back in cell order.
fn sweep<C: Sync, F>(cells: &[C], f: F) -> Vec<Row>
where
    F: Fn(&C) -> Row + Sync + Send,
{
    cells.par_iter().map(f).collect()
}

fn product2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn product3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64)> {
    product2(a, b).into_iter().flat_map(|(x, y)| c.iter().map(move |&z| (x, y, z))).collect()
}

fn sides_text(c: &Cuboid) -> String {
    c.sides().iter().map(|l| format!("{l:?}")).collect::<Vec<_>>().join(";")
}

pub fn eig(s: &Settings) -> Output {
    let beta = required(&s.beta, "beta")?;
    let k = or_default(&s.k, "1");
    let ks = integers(&k, "k")?;
    let length = s.sides.as_ref().map(|g| single(g, "sides")).transpose()?.unwrap_or(1.0);
    let opts = root_options(&s.tol);
    let cells: Vec<(f64, usize)> = beta.values.iter().flat_map(|&b| ks.iter().map(move |&k| (b, k))).collect();
    let mut t = Table::new(vec!["beta", "k", "length", "eigenvalue", "bracket_lo", "bracket_hi", "residual", "iterations"]);
    t.rows = sweep(&cells, |&(b, k)| {
        let inputs = vec![b.into(), k.into(), length.into()];
        let r = BoundaryCondition::from_beta(b).and_then(|bc| {
            let e = eigenvalue_with(k, bc, length, &opts)?;
            let bracket = match bc {
                BoundaryCondition::Robin(b) => {
                    let (lo, hi) = arctan_bracket(k, b * length)?;
                    Some((lo / (length * length), hi / (length * length)))
                }
                _ => None,
            };
            Ok((e, bracket))
        });
        match r {
            Ok((e, br)) => {
                let mut v = inputs;
                v.extend([
                    e.value.into(),
                    br.map(|b| b.0).into(),
                    br.map(|b| b.1).into(),
                    e.residual.into(),
                    e.iterations.into(),
                ]);
                Row::ok(v)
            }
            Err(e) => Row::failed(inputs, 5, e),
        }
    });
    let mut m = manifest("eig", s, &[("beta", beta), ("k", &k)]);
    m.settings.push(("length", format!("{length:?}")));
    Ok((m, t))
}

fn cuboid_from(s: &Settings, d: usize) -> Result<Cuboid, UsageError> {
    if d == 0 {
        return Err(UsageError("--d must be at least 1".into()));
    }
    match &s.sides {
        Some(g) => Cuboid::new(g.values.clone()).map_err(|e| UsageError(format!("--sides: {e}"))),
        None => Ok(Cuboid::unit_cube(d)),
    }
}

pub fn riesz(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let lambda = required(&s.lambda, "lambda")?;
    let d = or_default(&s.d, "2");
    let dims = integers(&d, "d")?;
    let [dim] = dims[..] else {
        return Err(UsageError("--d takes a single dimension for riesz".into()));
    };
    let cuboid = cuboid_from(s, dim)?;
    let opts = riesz_options(&s.tol);
    let coupled = s.coupled;
    let cells = product3(&gamma.values, &beta.values, &lambda.values);
    let mut t = Table::new(vec![
        "gamma",
        "beta",
        "lambda",
        "value",
        "leading",
        "second",
        "remainder",
        "normalized_remainder",
    ]);
    t.rows = sweep(&cells, |&(g, b, l)| {
        let inputs = vec![g.into(), b.into(), l.into()];
        let r = BoundaryCondition::from_beta(b)
            .and_then(|bc| SpectralQuery::new(g, l, bc, cuboid.clone()))
            .and_then(|q| two_term_prediction_with(&q, coupled, &opts));
        match r {
            Ok(w) => Row::ok(
                inputs
                    .into_iter()
                    .chain([w.value, w.leading, w.second, w.remainder, w.normalized_remainder].map(Value::from))
                    .collect(),
            ),
            Err(e) => Row::failed(inputs, 5, e),
        }
    });
    let mut m = manifest("riesz", s, &[("gamma", gamma), ("beta", beta), ("lambda", lambda)]);
    m.settings.push(("sides", sides_text(&cuboid)));
    Ok((m, t))
}

pub fn constants(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let d = or_default(&s.d, "1");
    let ds: Vec<f64> = integers(&d, "d")?.into_iter().map(|v| v as f64).collect();
    let cells = product3(&gamma.values, &ds, &beta.values);
    let mut t = Table::new(vec!["gamma", "d", "beta", "lsc", "l_const", "l_const_arctan"]);
    t.rows = sweep(&cells, |&(g, d, b)| {
        let d = d as usize;
        let inputs = vec![g.into(), d.into(), b.into()];
        let r = (|| Ok::<_, robin_spectra::Error>((lsc(g, d)?, l_const(g, d, b)?, l_const_arctan(g, d, b)?)))();
        match r {
            Ok((a, b, c)) => Row::ok(inputs.into_iter().chain([a.into(), b.into(), c.into()]).collect()),
            Err(e) => Row::failed(inputs, 3, e),
        }
    });
    Ok((manifest("constants", s, &[("gamma", gamma), ("d", &d), ("beta", beta)]), t))
}

pub fn betaw(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let d = or_default(&s.d, "0");
    let dim = integers(&d, "d")?;
    let [dim] = dim[..] else {
        return Err(UsageError("--d takes a single dimension for betaw".into()));
    };
    let tol = s.tol.beta.unwrap_or(BETA_W_TOL);
    let mut t = Table::new(vec!["gamma", "beta_w", "bracket_lo", "bracket_hi"]);
    t.rows = sweep(&gamma.values, |&g| {
        let r = if g >= 0.0 && g.is_finite() {
            beta_w_for_exponent(g + 0.5 * dim as f64, tol)
        } else {
            Err(robin_spectra::Error::Domain(format!("Riesz order must be non-negative, got {g}")))
        };
        match r {
            Ok(b) => Row::ok(vec![g.into(), b.value.into(), b.bracket.0.into(), b.bracket.1.into()]),
            Err(e) => Row::failed(vec![g.into()], 3, e),
        }
    });
    let mut m = manifest("betaw", s, &[("gamma", gamma)]);
    m.settings.push(("d", dim.to_string()));
    Ok((m, t))
}

pub fn betak(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let k = or_default(&s.k, "1,2,3");
    let ks = integers(&k, "k")?;
    let search = band_search(&s.tol);
    let cells: Vec<(f64, usize)> = gamma.values.iter().flat_map(|&g| ks.iter().map(move |&k| (g, k))).collect();
    let mut t = Table::new(vec!["gamma", "k", "beta_k", "worst_lambda"]);
    t.rows = sweep(&cells, |&(g, k)| {
        let inputs = vec![g.into(), k.into()];
        match beta_k_with(g, k, &search) {
            Ok(b) => Row::ok(inputs.into_iter().chain([b.beta_k.into(), b.worst_lambda.into()]).collect()),
            Err(e) => Row::failed(inputs, 2, e),
        }
    });
    Ok((manifest("betak", s, &[("gamma", gamma), ("k", &k)]), t))
}

fn deficit_cells(s: &Settings) -> Result<(&Grid, &Grid, &Grid, Vec<(f64, f64, f64)>), UsageError> {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let lambda = required(&s.lambda, "lambda")?;
    let cells = product3(&gamma.values, &beta.values, &lambda.values);
    Ok((gamma, beta, lambda, cells))
}

pub fn deficit_rows(cells: &[(f64, f64, f64)]) -> Vec<Row> {
    sweep(cells, |&(g, b, l)| {
        let inputs = vec![g.into(), b.into(), l.into()];
        match deficit_sample(g, b, l) {
            Ok(d) => Row::ok(inputs.into_iter().chain([d.deficit.into(), d.oscillation.into()]).collect()),
            Err(e) => Row::failed(inputs, 2, e),
        }
    })
}

pub fn deficit(s: &Settings) -> Output {
    let (gamma, beta, lambda, cells) = deficit_cells(s)?;
    let mut t = Table::new(vec!["gamma", "beta", "lambda", "deficit", "oscillation"]);
    t.rows = deficit_rows(&cells);
    Ok((manifest("deficit", s, &[("gamma", gamma), ("beta", beta), ("lambda", lambda)]), t))
}

/// Period in `√λ` of one oscillation series, when its grid is uniform in `√λ`.
pub fn period_in_sqrt_lambda(lambdas: &[f64], osc: &[f64]) -> Option<f64> {
    let roots: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    if roots.len() < 8 {
        return None;
    }
    let h = (roots[roots.len() - 1] - roots[0]) / (roots.len() - 1) as f64;
    let uniform = h > 0.0 && roots.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-6 * h);
    if !uniform {
        return None;
    }
    autocorrelation_period(osc).map(|lag| lag * h)
}

pub fn oscillation(s: &Settings) -> Output {
    let (gamma, beta, lambda, cells) = deficit_cells(s)?;
    let rows = deficit_rows(&cells);
    let mut t = Table::new(vec!["gamma", "beta", "lambda", "sqrt_lambda", "oscillation"]);
    let n = lambda.values.len();
    for (series, chunk) in rows.chunks(n).enumerate() {
        let (g, b, _) = cells[series * n];
        let mut osc = Vec::with_capacity(n);
        for (row, &l) in chunk.iter().zip(&lambda.values) {
            let inputs: Vec<Value> = vec![g.into(), b.into(), l.into(), l.sqrt().into()];
            match &row.error {
                None => {
                    let v = row.values[4].clone();
                    if let Value::Real(x) = v {
                        osc.push(x);
                    }
                    t.rows.push(Row::ok(inputs.into_iter().chain([v]).collect()));
                }
                Some(e) => t.rows.push(Row::failed(inputs, 1, e.clone())),
            }
        }
        let period = (osc.len() == n).then(|| period_in_sqrt_lambda(&lambda.values, &osc)).flatten();
        t.notes.push((
            format!("period_sqrt_lambda[gamma={g:?},beta={b:?}]"),
            period.map_or("none".into(), |p| format!("{p:?}")),
        ));
    }
    Ok((manifest("oscillation", s, &[("gamma", gamma), ("beta", beta), ("lambda", lambda)]), t))
}

pub fn rexcess(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let lambda = required(&s.lambda, "lambda")?;
    let lambda_max = single(lambda, "lambda")?;
    let cells = product2(&gamma.values, &beta.values);
    let mut t = Table::new(vec!["gamma", "beta", "lambda_max", "r_excess", "grid_sup", "attaining_lambda"]);
    t.rows = sweep(&cells, |&(g, b)| {
        let inputs = vec![g.into(), b.into(), lambda_max.into()];
        match r_excess_1d(g, b, lambda_max) {
            Ok(r) => Row::ok(
                inputs.into_iter().chain([r.value.into(), r.grid_sup.into(), r.attaining_lambda.into()]).collect(),
            ),
            Err(e) => Row::failed(inputs, 3, e),
        }
    });
    Ok((manifest("rexcess", s, &[("gamma", gamma), ("beta", beta), ("lambda", lambda)]), t))
}

fn maximizer_values(m: &Maximizer) -> [Value; 6] {
    [
        m.value.into(),
        m.normalized.into(),
        sides_text(&m.cuboid).into(),
        m.cuboid.aspect_ratio().into(),
        m.min_side_wavelengths.into(),
        m.multistart_spread.into(),
    ]
}

const MAXIMIZER_COLUMNS: [&str; 6] =
    ["value", "normalized", "sides", "aspect_ratio", "min_side_wavelengths", "multistart_spread"];

pub fn optimize(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let lambda = required(&s.lambda, "lambda")?;
    let d = or_default(&s.d, "2");
    let ds: Vec<f64> = integers(&d, "d")?.into_iter().map(|v| v as f64).collect();
    let opts = optimizer_options(&s.tol);
    let coupled = s.coupled;
    let cells: Vec<(f64, f64, f64, f64)> = product3(&gamma.values, &ds, &lambda.values)
        .into_iter()
        .flat_map(|(g, d, l)| beta.values.iter().map(move |&b| (g, d, l, b)))
        .collect();
    let mut columns = vec!["gamma", "d", "lambda", "beta"];
    columns.extend(MAXIMIZER_COLUMNS);
    let mut t = Table::new(columns);
    t.rows = sweep(&cells, |&(g, d, l, b)| {
        let d = d as usize;
        let inputs = vec![g.into(), d.into(), l.into(), b.into()];
        let p = if coupled {
            OptimizationProblem::coupled(g, d, l, b)
        } else {
            OptimizationProblem { gamma: g, d, lambda: l, beta: b }
        };
        match maximize_with(&p, &[], &opts) {
            Ok(m) => Row::ok(inputs.into_iter().chain(maximizer_values(&m)).collect()),
            Err(e) => Row::failed(inputs, 6, e),
        }
    });
    Ok((manifest("optimize", s, &[("gamma", gamma), ("d", &d), ("lambda", lambda), ("beta", beta)]), t))
}

pub fn trajectory(s: &Settings) -> Output {
    let gamma = required(&s.gamma, "gamma")?;
    let beta = required(&s.beta, "beta")?;
    let lambda = required(&s.lambda, "lambda")?;
    let d = or_default(&s.d, "2");
    let ds: Vec<f64> = integers(&d, "d")?.into_iter().map(|v| v as f64).collect();
    let mut opts = TrajectoryOptions { optimizer: optimizer_options(&s.tol), ..TrajectoryOptions::default() };
    if let Some(a) = s.tol.aspect {
        opts.aspect_tol = a;
    }
    let series = product3(&gamma.values, &ds, &beta.values);
    let blocks: Vec<Vec<Row>> = series
        .par_iter()
        .map(|&(g, d, b)| {
            let d = d as usize;
            let inputs = |l: f64| -> Vec<Value> { vec![g.into(), d.into(), b.into(), l.into()] };
            match classify_trajectory_with(g, d, b, &lambda.values, &opts) {
                Ok(c) => c
                    .maximizers
                    .iter()
                    .zip(&c.lambdas)
                    .map(|(m, &l)| {
                        let verdict = format!("{:?}", c.verdict);
                        Row::ok(inputs(l).into_iter().chain(maximizer_values(m)).chain([verdict.into()]).collect())
                    })
                    .collect(),
                Err(e) => lambda.values.iter().map(|&l| Row::failed(inputs(l), 7, e.clone())).collect(),
            }
        })
        .collect();
    let mut columns = vec!["gamma", "d", "beta_rel", "lambda"];
    columns.extend(MAXIMIZER_COLUMNS);
    columns.push("verdict");
    let mut t = Table::new(columns);
    t.rows = blocks.into_iter().flatten().collect();
    let mut m = manifest("trajectory", s, &[("gamma", gamma), ("d", &d), ("beta", beta), ("lambda", lambda)]);
    m.settings.push(("coupled_implied", "true".into()));
    Ok((m, t))
}
