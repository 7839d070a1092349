//! Experiment parameters: long flags, optionally layered over a JSON config file.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Every knob of every command. Unset values serialize as absent, so the merged config
/// written into artifact headers only lists what was actually chosen.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// JSON file with any of these parameters; flags win.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Output file (required: data never goes to stdout).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    #[arg(long = "N", global = true)]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n_center: Option<usize>,

    #[arg(long = "n", global = true)]
    #[serde(rename = "n", skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Walk breadth (number of Bessel zeros kept per order).
    #[arg(long = "B", global = true)]
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub breadth: Option<usize>,

    /// Polymer depth (number of orders summed).
    #[arg(long = "V", global = true)]
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub bessel: bool,

    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<i32>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub finite: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub limit: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub oracle: bool,

    /// Index list `(a,k),(a',k'),…`; consecutive entries form one covariance pair.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<String>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i32>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i32>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub polymer: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub tridiag: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub infinity: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<i32>,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub theorem1: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub roots: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "is_false")]
    pub qasymp: bool,

    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i32>,

    #[arg(long = "Ns", global = true, value_delimiter = ',')]
    #[serde(rename = "Ns", skip_serializing_if = "Vec::is_empty")]
    pub ns: Vec<usize>,
}

impl Params {
    /// Overlay `self` (from flags) on the config file, if any.
    pub fn resolve(self) -> Result<Params> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        let mut merged = serde_json::to_value(&file)?;
        let over = serde_json::to_value(&self)?;
        if let (Value::Object(base), Value::Object(top)) = (&mut merged, over) {
            base.extend(top);
        }
        let mut out: Params = serde_json::from_value(merged)?;
        out.config = Some(path);
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("params serialize")
    }

    pub fn out(&self) -> Result<&Path> {
        match &self.out {
            Some(p) => Ok(p),
            None => bail!("missing --out: data is only ever written to a file"),
        }
    }

    pub fn n_center(&self) -> Result<usize> {
        match self.n_center {
            Some(0) => bail!("--N must be at least 1"),
            Some(n) => Ok(n),
            None => bail!("missing --N"),
        }
    }

    /// `(N, n)` with `n ≥ N ≥ 1`.
    pub fn crystal_shape(&self) -> Result<(usize, usize)> {
        let nc = self.n_center()?;
        let rows = self.rows.context("missing --n")?;
        if rows < nc {
            bail!("need n ≥ N (got N={nc}, n={rows})");
        }
        Ok((nc, rows))
    }

    pub fn samples(&self) -> Result<usize> {
        match self.samples.unwrap_or(10_000) {
            0 => bail!("--samples must be at least 1"),
            m => Ok(m),
        }
    }

    pub fn breadth(&self) -> Result<usize> {
        match self.breadth.unwrap_or(400) {
            0 => bail!("--B must be at least 1"),
            b => Ok(b),
        }
    }

    pub fn depth(&self) -> Result<usize> {
        match self.depth.unwrap_or(60) {
            0 => bail!("--V must be at least 1"),
            v => Ok(v),
        }
    }

    pub fn ns(&self) -> Result<Vec<usize>> {
        let ns = if self.ns.is_empty() { vec![50, 100, 200] } else { self.ns.clone() };
        if ns.contains(&0) {
            bail!("--Ns entries must be at least 1");
        }
        Ok(ns)
    }
}

fn load(path: &Path) -> Result<Params> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("invalid config {}: {e}", path.display()))
}

/// Parses `(a,k),(a',k'),…` (whitespace ignored).
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact.strip_prefix('(').and_then(|s| s.strip_suffix(')'));
    let Some(body) = body else {
        bail!("--pairs must look like \"(1,4),(1,5)\", got {text:?}");
    };
    body.split("),(")
        .map(|item| {
            let parse = |s: &str| s.parse::<usize>().map_err(|_| anyhow::anyhow!("bad index {s:?} in --pairs"));
            match item.split_once(',') {
                Some((a, k)) => Ok((parse(a)?, parse(k)?)),
                None => bail!("bad entry {item:?} in --pairs"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pairs("(1,4),(1,5)").unwrap(), vec![(1, 4), (1, 5)]);
        assert_eq!(parse_pairs(" (2, 3) ").unwrap(), vec![(2, 3)]);
        assert!(parse_pairs("1,4").is_err());
        assert!(parse_pairs("(1,x)").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"N": 3, "n": 5, "seed": 9, "oracle": true}"#).unwrap();
        let cli = Params { config: Some(path), n_center: Some(4), ..Default::default() };
        let p = cli.resolve().unwrap();
        assert_eq!((p.n_center, p.rows, p.seed, p.oracle), (Some(4), Some(5), Some(9), true));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<Params>(r#"{"gamma": 1}"#).is_err());
    }
}
