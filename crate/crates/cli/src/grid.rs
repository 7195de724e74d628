//! Parameter grids.
//!
//! A grid is a comma-separated list of items. Each item is one of
//!
//! * a number (`inf` is accepted where a Robin parameter means Dirichlet),
//! * `start:step:stop`, an inclusive arithmetic range,
//! * `start:stop:Nlog`, `N` points spaced geometrically from `start` to `stop`.

use std::fmt;

/// A parsed grid together with the text it came from, so manifests can echo it.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub source: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GridError {}

/// Longest arithmetic range accepted, to catch a mistyped step.
const MAX_POINTS: usize = 10_000_000;

impl Grid {
    pub fn parse(text: &str) -> Result<Grid, GridError> {
        let mut values = Vec::new();
        for item in text.split(',') {
            let item = item.trim();
            if item.is_empty() {
                return Err(GridError(format!("empty item in grid `{text}`")));
            }
            parse_item(item, &mut values)?;
        }
        Ok(Grid { source: text.to_string(), values })
    }

    /// `n` points with log10 exponents evenly spaced from `lo` to `hi`, written `lo:hi:n`.
    pub fn parse_log_exponents(text: &str) -> Result<Grid, GridError> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts[..] else {
            return Err(GridError(format!("expected lo:hi:n for a log grid, got `{text}`")));
        };
        let (lo, hi) = (number(lo)?, number(hi)?);
        let n = count(n)?;
        let values = spaced(lo, hi, n).into_iter().map(|e| 10f64.powf(e)).collect();
        Ok(Grid { source: format!("10^({text})"), values })
    }

    /// Values `s²` for `s` in the grid `text`, for grids uniform in `√λ`.
    pub fn parse_squared(text: &str) -> Result<Grid, GridError> {
        let g = Grid::parse(text)?;
        Ok(Grid { source: format!("({text})^2"), values: g.values.iter().map(|s| s * s).collect() })
    }

    /// The values as non-negative integers.
    pub fn integers(&self, what: &str) -> Result<Vec<usize>, GridError> {
        self.values
            .iter()
            .map(|&v| {
                if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
                    Ok(v as usize)
                } else {
                    Err(GridError(format!("{what} must be a non-negative integer, got {v}")))
                }
            })
            .collect()
    }
}

fn parse_item(item: &str, out: &mut Vec<f64>) -> Result<(), GridError> {
    let parts: Vec<&str> = item.split(':').map(str::trim).collect();
    match parts[..] {
        [x] => out.push(number(x)?),
        [a, b, c] if c.ends_with("log") => {
            let (lo, hi) = (number(a)?, number(b)?);
            if !(lo > 0.0 && hi > 0.0) {
                return Err(GridError(format!("log grid `{item}` needs positive end points")));
            }
            let n = count(c.trim_end_matches("log"))?;
            out.extend(spaced(lo.ln(), hi.ln(), n).into_iter().map(f64::exp));
            // Hit the end points exactly rather than through exp(ln x).
            let len = out.len();
            out[len - n] = lo;
            out[len - 1] = hi;
        }
        [a, s, b] => out.extend(range(a, s, b)?),
        _ => return Err(GridError(format!("cannot parse grid item `{item}`"))),
    }
    Ok(())
}

fn number(s: &str) -> Result<f64, GridError> {
    let v: f64 = s.parse().map_err(|_| GridError(format!("`{s}` is not a number")))?;
    if v.is_nan() {
        return Err(GridError("NaN is not a valid grid value".into()));
    }
    Ok(v)
}

fn count(s: &str) -> Result<usize, GridError> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(GridError(format!("`{s}` is not a positive point count"))),
    }
}

fn spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect()
}

/// Digits after the decimal point of a plain decimal literal, if it is one.
fn decimals(s: &str) -> Option<u32> {
    if s.contains(['e', 'E']) || s.contains("inf") {
        return None;
    }
    Some(s.split_once('.').map_or(0, |(_, frac)| frac.len() as u32))
}

/// Inclusive range. Decimal literals are stepped in integer units of their
/// last digit, so `0:0.1:1` yields `0.3` rather than `0.30000000000000004`.
fn range(a: &str, s: &str, b: &str) -> Result<Vec<f64>, GridError> {
    let (start, step, stop) = (number(a)?, number(s)?, number(b)?);
    if !(step.is_finite() && step != 0.0 && start.is_finite() && stop.is_finite()) {
        return Err(GridError(format!("invalid range {a}:{s}:{b}")));
    }
    let span = (stop - start) / step;
    if span < -1e-9 {
        return Err(GridError(format!("range {a}:{s}:{b} is empty")));
    }
    let n = (span + 1e-9).floor() as usize + 1;
    if n > MAX_POINTS {
        return Err(GridError(format!("range {a}:{s}:{b} has {n} points")));
    }
    let exact = match (decimals(a), decimals(s)) {
        (Some(da), Some(ds)) if da.max(ds) <= 15 => {
            let scale = 10f64.powi(da.max(ds) as i32);
            let (ai, si) = ((start * scale).round(), (step * scale).round());
            (ai.abs() < 2f64.powi(52) && (si * n as f64).abs() < 2f64.powi(52)).then_some((ai, si, scale))
        }
        _ => None,
    };
    Ok((0..n)
        .map(|i| match exact {
            Some((ai, si, scale)) => (ai + si * i as f64) / scale,
            None => start + step * i as f64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive_and_decimal_clean() {
        let g = Grid::parse("0:0.5:2").unwrap();
        assert_eq!(g.values, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let g = Grid::parse("0.2:0.2:1").unwrap();
        assert_eq!(g.values, vec![0.2, 0.4, 0.6, 0.8, 1.0]);
        assert_eq!(Grid::parse("0:0.1:20").unwrap().values.len(), 201);
    }

    #[test]
    fn lists_mix_items() {
        let g = Grid::parse("1, 2,5:1:7,inf").unwrap();
        assert_eq!(g.values, vec![1.0, 2.0, 5.0, 6.0, 7.0, f64::INFINITY]);
    }

    #[test]
    fn log_items_hit_both_ends() {
        let g = Grid::parse("1:1000:4log").unwrap();
        assert_eq!(g.values[0], 1.0);
        assert_eq!(g.values[3], 1000.0);
        assert!((g.values[1] - 10.0).abs() < 1e-12);
        let e = Grid::parse_log_exponents("1:6:6").unwrap();
        assert_eq!(e.values, vec![1e1, 1e2, 1e3, 1e4, 1e5, 1e6]);
    }

    #[test]
    fn descending_ranges_need_a_negative_step() {
        assert_eq!(Grid::parse("3:-1:1").unwrap().values, vec![3.0, 2.0, 1.0]);
        assert!(Grid::parse("3:1:1").is_err());
        assert!(Grid::parse("1:0:3").is_err());
    }

    #[test]
    fn malformed_items_are_rejected() {
        for bad in ["", "1,,2", "a", "1:2", "1:2:3:4", "0:10:5log", "1:10:0log", "nan"] {
            assert!(Grid::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn integer_views() {
        assert_eq!(Grid::parse("1:1:3").unwrap().integers("k").unwrap(), vec![1, 2, 3]);
        assert!(Grid::parse("1.5").unwrap().integers("k").is_err());
    }
}
