//! Run configuration files.
//!
//! A configuration file is TOML restricted to three flat tables. Every key is
//! optional and command-line flags take precedence:
//!
//! ```toml
//! [grid]
//! gamma = "0:0.5:20"      # any grid expression, or a bare number
//! beta = 1.0
//! lambda = "1:1e6:600log"
//! lambda_log = "1:6:600"  # log10 exponents, as for --lambda-log
//! sqrt_lambda = "100:0.1:160"
//! d = 2
//! k = "1,2,3"
//! sides = "1,2"
//!
//! [run]
//! coupled = true
//! format = "csv"          # or "json"
//! jobs = 4
//! out = "sweep.csv"
//!
//! [tolerances]
//! root = 1e-13
//! beta = 1e-8
//! shape = 1e-7
//! aspect = 1.05
//! max_terms = 1e8
//! ```
//!
//! Unknown tables or keys are errors reported with their line and column.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub gamma: Option<GridText>,
    pub beta: Option<GridText>,
    pub lambda: Option<GridText>,
    pub lambda_log: Option<GridText>,
    pub sqrt_lambda: Option<GridText>,
    pub d: Option<GridText>,
    pub k: Option<GridText>,
    pub sides: Option<GridText>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub coupled: Option<bool>,
    pub format: Option<String>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub root: Option<f64>,
    pub beta: Option<f64>,
    pub shape: Option<f64>,
    pub aspect: Option<f64>,
    pub max_terms: Option<f64>,
}

/// A grid written either as a string or as a bare number.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridText {
    Number(f64),
    Text(String),
}

impl GridText {
    pub fn as_text(&self) -> String {
        match self {
            GridText::Number(v) => format!("{v:?}"),
            GridText::Text(s) => s.clone(),
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<ConfigFile, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
