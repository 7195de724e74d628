//! Datasets for the three standard figures. Each figure is a CSV file plus a
//! JSON description naming the axes and series, for any plotting tool.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::json;

use robin_spectra::constants::beta_w;
use robin_spectra::thresholds::{band_thresholds, sqrt_uniform_grid, BandSearch};

use crate::commands::{deficit_rows, period_in_sqrt_lambda};
use crate::grid::Grid;
use crate::table::{write_csv, Manifest, Row, Table, Value};
use crate::{Failure, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Fig1,
    Fig2,
    Fig3,
    All,
}

/// Default γ grid of the threshold figure. The per-band thresholds need γ > 0.
const FIG1_GAMMA: &str = "0.2:0.2:20";
/// Riesz orders of the deficit and oscillation figures.
const FIG23_GAMMA: &str = "1,10";
/// Log10 range and point count of the deficit figure.
const FIG2_LAMBDA_LOG: &str = "0:6:601";
/// The oscillation figure samples √λ on `[FIG3_SQRT_START, FIG3_SQRT_START + 20π]`.
const FIG3_SQRT_START: f64 = 100.0;
const FIG3_POINTS: usize = 1000;

/// Writes the requested figures into `--out` (default `figures/`) and
/// returns the number of failed rows.
pub fn write(which: Which, s: &Settings) -> Result<usize, Failure> {
    let dir = s.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir)?;
    let mut failed = 0;
    if matches!(which, Which::Fig1 | Which::All) {
        failed += fig1(&dir, s)?;
    }
    if matches!(which, Which::Fig2 | Which::All) {
        failed += fig2(&dir, s)?;
    }
    if matches!(which, Which::Fig3 | Which::All) {
        failed += fig3(&dir, s)?;
    }
    Ok(failed)
}

fn search(s: &Settings) -> BandSearch {
    let mut b = BandSearch::default();
    if let Some(w) = s.tol.beta {
        b.beta_tol = w;
    }
    if let Some(r) = s.tol.root {
        b.roots.rel_tol = r;
    }
    b
}

fn save(dir: &Path, name: &str, manifest: &Manifest, table: &Table, description: serde_json::Value) -> Result<(), Failure> {
    let csv_path = dir.join(format!("{name}.csv"));
    let mut f = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
    write_csv(&mut f, manifest, table)?;
    let json_path = dir.join(format!("{name}.json"));
    let text = serde_json::to_string_pretty(&description).map_err(std::io::Error::other)?;
    std::fs::write(&json_path, text + "\n")?;
    eprintln!(
        "robin figures: wrote {} and {} ({} rows, {} failed)",
        csv_path.display(),
        json_path.display(),
        table.rows.len(),
        table.failures()
    );
    Ok(())
}

fn manifest(name: &str, grids: Vec<(&'static str, String)>) -> Manifest {
    Manifest { command: format!("figures {name}"), grids, settings: Vec::new() }
}

fn fig1(dir: &Path, s: &Settings) -> Result<usize, Failure> {
    let gamma = s.gamma.clone().unwrap_or_else(|| Grid::parse(FIG1_GAMMA).expect("valid grid"));
    let search = search(s);
    let mut t = Table::new(vec!["gamma", "beta_w", "beta_1", "beta_2", "beta_3"]);
    t.rows = gamma
        .values
        .par_iter()
        .map(|&g| {
            let r = (|| {
                let w = beta_w(g, 0)?.value;
                let b = band_thresholds(g, 3, &search)?;
                Ok::<_, robin_spectra::Error>([w, b[0].beta_k, b[1].beta_k, b[2].beta_k])
            })();
            match r {
                Ok(v) => Row::ok(std::iter::once(g).chain(v).map(Value::from).collect()),
                Err(e) => Row::failed(vec![g.into()], 4, e),
            }
        })
        .collect();
    let real = |row: &Row, i: usize| match row.values[i] {
        Value::Real(v) => Some(v),
        _ => None,
    };
    // γ where column `hi` first rises above column `lo`, by linear interpolation.
    let crossing = |lo: usize, hi: usize| -> Option<f64> {
        t.rows.windows(2).find_map(|w| {
            let a = real(&w[0], hi)? - real(&w[0], lo)?;
            let b = real(&w[1], hi)? - real(&w[1], lo)?;
            let (g0, g1) = (real(&w[0], 0)?, real(&w[1], 0)?);
            (a <= 0.0 && b > 0.0).then(|| g0 + (g1 - g0) * a / (a - b))
        })
    };
    let (c12, c23) = (crossing(2, 3), crossing(3, 4));
    t.notes.push(("crossing_beta_2_over_beta_1".into(), format!("{c12:?}")));
    t.notes.push(("crossing_beta_3_over_beta_2".into(), format!("{c23:?}")));
    let description = json!({
        "figure": "fig1",
        "title": "Sign change of L_{γ,0} and per-band thresholds β^(k)(γ), k = 1, 2, 3",
        "data": "fig1.csv",
        "x": { "column": "gamma", "label": "γ" },
        "y": { "label": "β", "scale": "linear" },
        "series": [
            { "column": "beta_w", "label": "β_W(γ,0)" },
            { "column": "beta_1", "label": "β^(1)(γ)" },
            { "column": "beta_2", "label": "β^(2)(γ)" },
            { "column": "beta_3", "label": "β^(3)(γ)" },
        ],
        "crossings": { "beta_2_over_beta_1": c12, "beta_3_over_beta_2": c23 },
    });
    save(dir, "fig1", &manifest("fig1", vec![("gamma", gamma.source.clone())]), &t, description)?;
    Ok(t.failures())
}

/// The Robin parameters drawn for one γ: the sign change, the first two band
/// thresholds and a value above both.
fn beta_set(gamma: f64, search: &BandSearch) -> robin_spectra::Result<Vec<(&'static str, f64)>> {
    let w = beta_w(gamma, 0)?.value;
    let b = band_thresholds(gamma, 2, search)?;
    let larger = 2.0 * b[0].beta_k.max(b[1].beta_k);
    Ok(vec![("beta_w", w), ("beta_1", b[0].beta_k), ("beta_2", b[1].beta_k), ("larger", larger)])
}

struct Series {
    gamma: f64,
    label: &'static str,
    beta: f64,
}

fn series(s: &Settings) -> Result<(Grid, Vec<Series>), Failure> {
    let gamma = s.gamma.clone().unwrap_or_else(|| Grid::parse(FIG23_GAMMA).expect("valid grid"));
    let search = search(s);
    let sets: Vec<_> = gamma.values.par_iter().map(|&g| beta_set(g, &search).map(|v| (g, v))).collect();
    let mut out = Vec::new();
    for set in sets {
        let (g, betas) = set.map_err(Failure::Numeric)?;
        out.extend(betas.into_iter().map(|(label, beta)| Series { gamma: g, label, beta }));
    }
    Ok((gamma, out))
}

fn series_json(list: &[Series]) -> serde_json::Value {
    list.iter().map(|x| json!({ "gamma": x.gamma, "series": x.label, "beta": x.beta })).collect()
}

fn fig2(dir: &Path, s: &Settings) -> Result<usize, Failure> {
    let (gamma, list) = series(s)?;
    let lambda = s.lambda.clone().unwrap_or_else(|| Grid::parse_log_exponents(FIG2_LAMBDA_LOG).expect("valid grid"));
    let cells: Vec<(f64, f64, f64)> =
        list.iter().flat_map(|x| lambda.values.iter().map(move |&l| (x.gamma, x.beta, l))).collect();
    let rows = deficit_rows(&cells);
    let mut t = Table::new(vec!["gamma", "series", "beta", "lambda", "deficit"]);
    let n = lambda.values.len();
    let mut summaries = Vec::new();
    for (x, chunk) in list.iter().zip(rows.chunks(n)) {
        let mut negative = 0usize;
        for (row, &l) in chunk.iter().zip(&lambda.values) {
            let inputs: Vec<Value> = vec![x.gamma.into(), x.label.into(), x.beta.into(), l.into()];
            match &row.error {
                None => {
                    let v = row.values[3].clone();
                    if matches!(v, Value::Real(d) if d < 0.0) {
                        negative += 1;
                    }
                    t.rows.push(Row::ok(inputs.into_iter().chain([v]).collect()));
                }
                Some(e) => t.rows.push(Row::failed(inputs, 1, e.clone())),
            }
        }
        t.notes.push((format!("negative_rows[gamma={:?},{}]", x.gamma, x.label), negative.to_string()));
        summaries.push(json!({ "gamma": x.gamma, "series": x.label, "beta": x.beta, "negative_rows": negative }));
    }
    let description = json!({
        "figure": "fig2",
        "title": "Normalised Berezin deficit of the coupled interval problem",
        "data": "fig2.csv",
        "x": { "column": "lambda", "label": "λ", "scale": "log" },
        "y": { "column": "deficit", "label": "λ^{-γ}(L^sc λ^{γ+1/2} - Tr)", "scale": "linear" },
        "group_by": ["gamma", "series"],
        "series": series_json(&list),
        "summary": summaries,
    });
    let m = manifest("fig2", vec![("gamma", gamma.source.clone()), ("lambda", lambda.source.clone())]);
    save(dir, "fig2", &m, &t, description)?;
    Ok(t.failures())
}

fn fig3(dir: &Path, s: &Settings) -> Result<usize, Failure> {
    let (gamma, list) = series(s)?;
    let lambda = s.lambda.clone().unwrap_or_else(|| {
        let values = sqrt_uniform_grid(FIG3_SQRT_START, FIG3_SQRT_START + 20.0 * PI, FIG3_POINTS);
        Grid { source: format!("√λ uniform on [{FIG3_SQRT_START}, {FIG3_SQRT_START} + 20π], {FIG3_POINTS} points"), values }
    });
    let cells: Vec<(f64, f64, f64)> =
        list.iter().flat_map(|x| lambda.values.iter().map(move |&l| (x.gamma, x.beta, l))).collect();
    let rows = deficit_rows(&cells);
    let mut t = Table::new(vec!["gamma", "series", "beta", "sqrt_lambda", "lambda", "oscillation"]);
    let n = lambda.values.len();
    let mut summaries = Vec::new();
    for (x, chunk) in list.iter().zip(rows.chunks(n)) {
        let mut osc = Vec::with_capacity(n);
        for (row, &l) in chunk.iter().zip(&lambda.values) {
            let inputs: Vec<Value> = vec![x.gamma.into(), x.label.into(), x.beta.into(), l.sqrt().into(), l.into()];
            match &row.error {
                None => {
                    let v = row.values[4].clone();
                    if let Value::Real(o) = v {
                        osc.push(o);
                    }
                    t.rows.push(Row::ok(inputs.into_iter().chain([v]).collect()));
                }
                Some(e) => t.rows.push(Row::failed(inputs, 1, e.clone())),
            }
        }
        let period = (osc.len() == n).then(|| period_in_sqrt_lambda(&lambda.values, &osc)).flatten();
        t.notes.push((format!("period_sqrt_lambda[gamma={:?},{}]", x.gamma, x.label), format!("{period:?}")));
        summaries.push(json!({
            "gamma": x.gamma,
            "series": x.label,
            "beta": x.beta,
            "period_sqrt_lambda": period,
            "period_over_pi": period.map(|p| p / PI),
        }));
    }
    let description = json!({
        "figure": "fig3",
        "title": "Oscillating part of the coupled interval Riesz mean against √λ",
        "data": "fig3.csv",
        "x": { "column": "sqrt_lambda", "label": "√λ", "scale": "linear" },
        "y": { "column": "oscillation", "label": "λ^{-γ/2}(L^sc λ^{γ+1/2} + ½L_{γ,0}(β)λ^γ - Tr)", "scale": "linear" },
        "group_by": ["gamma", "series"],
        "series": series_json(&list),
        "summary": summaries,
    });
    let m = manifest("fig3", vec![("gamma", gamma.source.clone()), ("lambda", lambda.source.clone())]);
    save(dir, "fig3", &m, &t, description)?;
    Ok(t.failures())
}
