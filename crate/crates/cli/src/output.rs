use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Shortest decimal that parses back to the same `f64`, in exponent form when very small or large.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Writes a CSV with a fixed header and returns its path.
pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(CliError::Internal(format!("row of {} fields under a {}-column header", row.len(), header.len())));
        }
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path)
}

pub fn read_csv(path: &Path) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_owned).collect()))
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.manifest.json", self.command));
        fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

/// `a:b:k` for `k` evenly spaced points from `a` to `b`, `a,b,c` for a list, or one value.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Validation(format!("cannot parse grid {spec:?}; use a:b:k, a,b,c or a single number"));
    let value = |s: &str| -> CliResult<f64> {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    if let Some((a, rest)) = spec.split_once(':') {
        let (b, k) = rest.split_once(':').ok_or_else(bad)?;
        let (a, b) = (value(a)?, value(b)?);
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        return linspace(a, b, k);
    }
    spec.split(',').map(value).collect()
}

pub fn linspace(a: f64, b: f64, k: usize) -> CliResult<Vec<f64>> {
    if k == 0 {
        return Err(CliError::Validation("a grid needs at least one point".into()));
    }
    if b < a {
        return Err(CliError::Validation(format!("grid end {b} lies below its start {a}")));
    }
    if k == 1 {
        return Ok(vec![a]);
    }
    Ok((0..k).map(|i| if i + 1 == k { b } else { a + (b - a) * i as f64 / (k - 1) as f64 }).collect())
}

pub fn parse_sizes(spec: &str) -> CliResult<Vec<usize>> {
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Validation(format!("cannot parse system size {s:?}"))))
        .collect()
}
