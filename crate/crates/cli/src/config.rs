//! Run configuration: a flat `key = value` file, overridden by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format `{other}`, expected csv or json"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Settings shared by every suite.
///
/// `samples`, `dims` and `dmax` are optional overrides; each suite has its own
/// defaults (see the suite table in the README). Tolerance overrides are keyed
/// by check family, e.g. `tol.kubota = 0.02`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: Option<usize>,
    pub dims: Vec<usize>,
    pub dmax: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            samples: None,
            dims: Vec::new(),
            dmax: None,
            tolerances: BTreeMap::new(),
            out: None,
            format: Format::Csv,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_dims(value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse("dim", t))
        .collect()
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim();
        match key {
            "seed" => self.seed = parse(key, value)?,
            "samples" => self.samples = Some(parse(key, value)?),
            "dim" | "dims" => self.dims = parse_dims(value)?,
            "dmax" => self.dmax = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => self.format = value.parse()?,
            _ => match key.strip_prefix("tol.") {
                Some(name) if !name.is_empty() => {
                    self.tolerances.insert(name.to_string(), parse(key, value)?);
                }
                _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    /// Parses the flat format: one `key = value` per line, `#` starts a comment.
    pub fn parse_str(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        cfg.parse_str(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples == Some(0) {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(CliError::Config(format!("tolerance tol.{k} = {v} must be positive")));
        }
        if self.dims.contains(&0) {
            return Err(CliError::Config("dimensions must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, family: &str, default: f64) -> f64 {
        self.tolerances.get(family).copied().unwrap_or(default)
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    pub fn dims_or(&self, default: &[usize]) -> Vec<usize> {
        if self.dims.is_empty() {
            default.to_vec()
        } else {
            self.dims.clone()
        }
    }
}
