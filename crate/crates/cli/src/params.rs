//! `--key value` parameter lists, with `lo:hi:n` grids for tables.

use std::collections::BTreeMap;

use slit_core::Point;

use crate::error::CliError;

/// Parsed parameters, in the order they were given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(Vec<(String, String)>);

impl Params {
    /// Reads `--key value`, `--key=value` and `key=value` items.
    pub fn parse(items: &[String]) -> Result<Self, CliError> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < items.len() {
            let item = &items[i];
            let body = item.strip_prefix("--").unwrap_or(item);
            if let Some((k, v)) = body.split_once('=') {
                out.push((k.to_string(), v.to_string()));
                i += 1;
            } else if item.starts_with("--") {
                let v = items
                    .get(i + 1)
                    .ok_or_else(|| CliError::Usage(format!("missing value for {item}")))?;
                out.push((body.to_string(), v.clone()));
                i += 2;
            } else {
                return Err(CliError::Usage(format!("expected --key value, got {item:?}")));
            }
        }
        let mut seen = BTreeMap::new();
        for (k, _) in &out {
            if seen.insert(k.clone(), ()).is_some() {
                return Err(CliError::Usage(format!("parameter {k} given twice")));
            }
        }
        Ok(Self(out))
    }

    /// Removes and returns `key`, if present.
    pub fn take(&mut self, key: &str) -> Option<String> {
        let pos = self.0.iter().position(|(k, _)| k == key)?;
        Some(self.0.remove(pos).1)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_f64(key: &str, raw: &str) -> Result<f64, CliError> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{key}: cannot parse {raw:?} as a number")))
}

/// `"x1,x2"` as a point.
pub fn parse_point(key: &str, raw: &str) -> Result<Point, CliError> {
    let (a, b) = raw
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("{key}: expected x1,x2, got {raw:?}")))?;
    Ok(Point::new(parse_f64(key, a)?, parse_f64(key, b)?))
}

/// Values of one table axis: a number, a comma list, or an inclusive `lo:hi:n` grid.
pub fn parse_axis(key: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = raw.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (parse_f64(key, lo)?, parse_f64(key, hi)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{key}: grid count {n:?} is not an integer")))?;
            if n == 0 {
                return Err(CliError::Usage(format!("{key}: grid needs at least one point")));
            }
            if n == 1 {
                return Ok(vec![lo]);
            }
            let h = (hi - lo) / (n - 1) as f64;
            Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect())
        }
        [_] => raw.split(',').map(|v| parse_f64(key, v)).collect(),
        _ => Err(CliError::Usage(format!("{key}: expected value, list or lo:hi:n, got {raw:?}"))),
    }
}
