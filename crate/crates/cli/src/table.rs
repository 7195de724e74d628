//! Result tables and their CSV and JSON renderings.

use std::io::Write;

use serde_json::{json, Map, Value as Json};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

impl Value {
    /// Shortest decimal text that reads back to the same float.
    fn csv(&self) -> String {
        match self {
            Value::Real(v) => format!("{v:?}"),
            Value::Int(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Real(v) if v.is_finite() => json!(v),
            Value::Real(v) => json!(format!("{v:?}")),
            Value::Int(v) => json!(v),
            Value::Text(s) => json!(s),
            Value::Missing => Json::Null,
        }
    }
}

/// A row: the data columns and an outcome. Failed rows keep their input
/// columns and leave the outputs missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<Value>,
    pub error: Option<robin_spectra::Error>,
}

impl Row {
    pub fn ok(values: Vec<Value>) -> Row {
        Row { values, error: None }
    }

    /// The inputs followed by `outputs` missing columns.
    pub fn failed(mut inputs: Vec<Value>, outputs: usize, error: robin_spectra::Error) -> Row {
        inputs.extend(std::iter::repeat(Value::Missing).take(outputs));
        Row { values: inputs, error: Some(error) }
    }

    fn status(&self) -> &'static str {
        self.error.as_ref().map_or("ok", |e| e.code())
    }

    fn message(&self) -> String {
        self.error.as_ref().map_or(String::new(), |e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Extra `key = value` lines for the manifest, such as period estimates.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Everything needed to reproduce a table.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub command: String,
    /// `(name, source text)` of each grid in use.
    pub grids: Vec<(&'static str, String)>,
    pub settings: Vec<(&'static str, String)>,
}

fn manifest_lines(m: &Manifest, t: &Table) -> Vec<(String, String)> {
    let mut lines = vec![
        ("tool".to_string(), format!("robin {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), m.command.clone()),
    ];
    lines.extend(m.grids.iter().map(|(k, v)| (format!("grid.{k}"), v.clone())));
    lines.extend(m.settings.iter().map(|(k, v)| (k.to_string(), v.clone())));
    lines.push(("rows".into(), t.rows.len().to_string()));
    lines.push(("failed".into(), t.failures().to_string()));
    lines.extend(t.notes.iter().cloned());
    lines
}

/// CSV with the manifest as leading `#` comments. Contains nothing that
/// varies between identical runs.
pub fn write_csv(out: &mut dyn Write, m: &Manifest, t: &Table) -> std::io::Result<()> {
    for (k, v) in manifest_lines(m, t) {
        writeln!(out, "# {k} = {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let header = t.columns.iter().copied().chain(["status", "message"]);
    w.write_record(header)?;
    for row in &t.rows {
        let fields = row.values.iter().map(Value::csv).chain([row.status().to_string(), row.message()]);
        w.write_record(fields)?;
    }
    w.flush()
}

/// JSON object with a manifest header and one object per row.
pub fn write_json(out: &mut dyn Write, m: &Manifest, t: &Table, wall_seconds: f64, jobs: usize) -> std::io::Result<()> {
    let mut manifest = Map::new();
    for (k, v) in manifest_lines(m, t) {
        manifest.insert(k, json!(v));
    }
    manifest.insert("wall_seconds".into(), json!(wall_seconds));
    manifest.insert("jobs".into(), json!(jobs));
    let rows: Vec<Json> = t
        .rows
        .iter()
        .map(|r| {
            let mut o = Map::new();
            for (c, v) in t.columns.iter().zip(&r.values) {
                o.insert(c.to_string(), v.json());
            }
            o.insert("status".into(), json!(r.status()));
            if r.error.is_some() {
                o.insert("message".into(), json!(r.message()));
            }
            Json::Object(o)
        })
        .collect();
    let doc = json!({ "manifest": manifest, "columns": t.columns, "rows": rows });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
