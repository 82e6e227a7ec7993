//! Run configuration: a flat `key = value` manifest overridden by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use cyclespin::quantum::Spin;
use serde::{Deserialize, Serialize};

/// Keys accepted in manifests and as flags.
pub const KEYS: &[&str] = &[
    "beta",
    "beta-range",
    "chunk-csv",
    "eps",
    "field",
    "format",
    "g-rows",
    "inject-fault",
    "k",
    "n",
    "out",
    "proposal-rate",
    "samples",
    "seed",
    "spin",
    "theta",
    "timing",
];

/// Pairs of keys that may not both be set.
const EXCLUSIVE: &[(&str, &str)] = &[("theta", "spin"), ("beta", "beta-range")];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => bail!("format must be csv or json, got {s:?}"),
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

/// A subcommand name with its parameter map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub command: String,
    params: BTreeMap<String, String>,
}

/// Parses manifest text: one `key = value` per line, `#` starts a comment.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("line {}: expected key = value", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        ensure!(KEYS.contains(&k), "line {}: unknown key {k:?}", i + 1);
        ensure!(
            out.insert(k.to_string(), v.to_string()).is_none(),
            "line {}: duplicate key {k:?}",
            i + 1
        );
    }
    check_exclusive(&out)?;
    Ok(out)
}

fn check_exclusive(params: &BTreeMap<String, String>) -> Result<()> {
    for (a, b) in EXCLUSIVE {
        ensure!(
            !(params.contains_key(*a) && params.contains_key(*b)),
            "{a} and {b} are mutually exclusive"
        );
    }
    Ok(())
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> Self {
        RunConfig {
            command: command.into(),
            params: BTreeMap::new(),
        }
    }

    /// Reads a manifest as the base layer.
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let params = parse_manifest(&text).with_context(|| format!("in {}", path.display()))?;
        for (k, v) in params {
            self.params.insert(k, v);
        }
        Ok(())
    }

    /// Command-line overrides. Setting one key of an exclusive pair drops
    /// the other from the manifest layer; setting both is an error.
    pub fn apply_overrides(&mut self, overrides: &[(&str, String)]) -> Result<()> {
        let layer: BTreeMap<String, String> = overrides
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        check_exclusive(&layer)?;
        for (a, b) in EXCLUSIVE {
            if layer.contains_key(*a) {
                self.params.remove(*b);
            }
            if layer.contains_key(*b) {
                self.params.remove(*a);
            }
        }
        for (k, v) in layer {
            ensure!(KEYS.contains(&k.as_str()), "unknown key {k:?}");
            self.params.insert(k, v);
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow::anyhow!("invalid {key} {v:?}: {e}"))
            })
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<T>()
                            .map_err(|e| anyhow::anyhow!("invalid {key} entry {s:?}: {e}"))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse(key)
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        self.parse(key)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse(key)
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.parse::<bool>(key)?.unwrap_or(false))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    /// Integer local dimensions from `theta` or from `spin` via `2S + 1`.
    pub fn thetas(&self) -> Result<Option<Vec<usize>>> {
        if let Some(spins) = self.spins()? {
            return Ok(Some(spins.iter().map(|s| s.theta()).collect()));
        }
        let Some(list) = self.list::<usize>("theta")? else {
            return Ok(None);
        };
        ensure!(list.iter().all(|&t| t >= 1), "theta must be at least 1");
        Ok(Some(list))
    }

    /// A single integer `theta`, defaulting to `default`.
    pub fn theta(&self, default: usize) -> Result<usize> {
        match self.thetas()? {
            None => Ok(default),
            Some(v) if v.len() == 1 => Ok(v[0]),
            Some(_) => bail!("{} takes a single theta", self.command),
        }
    }

    /// A single real `theta >= 1`, as accepted by the simulator.
    pub fn theta_real(&self, default: f64) -> Result<f64> {
        if let Some(spins) = self.spins()? {
            ensure!(spins.len() == 1, "{} takes a single spin", self.command);
            return Ok(spins[0].theta() as f64);
        }
        let t = self.f64("theta")?.unwrap_or(default);
        ensure!(
            t >= 1.0 && t.is_finite(),
            "theta must be a finite real >= 1"
        );
        Ok(t)
    }

    pub fn spins(&self) -> Result<Option<Vec<Spin>>> {
        self.list::<Spin>("spin")
    }

    /// Inverse temperatures from `beta` (a list) or `beta-range`.
    pub fn betas(&self) -> Result<Option<Vec<f64>>> {
        if let Some(r) = self.get("beta-range") {
            return parse_range(r).map(Some);
        }
        let Some(list) = self.list::<f64>("beta")? else {
            return Ok(None);
        };
        ensure!(
            list.iter().all(|b| *b >= 0.0 && b.is_finite()),
            "beta must be finite and nonnegative"
        );
        Ok(Some(list))
    }

    pub fn fields(&self) -> Result<Option<Vec<f64>>> {
        let Some(list) = self.list::<f64>("field")? else {
            return Ok(None);
        };
        ensure!(list.iter().all(|h| h.is_finite()), "field must be finite");
        Ok(Some(list))
    }

    pub fn format(&self, default: Format) -> Result<Format> {
        Ok(self.parse::<Format>("format")?.unwrap_or(default))
    }
}

/// Expands `min:max:step` to `min, min + step, ..` up to `max` inclusive.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    ensure!(
        parts.len() == 3,
        "beta-range must be min:max:step, got {s:?}"
    );
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid number {p:?} in beta-range"))
        })
        .collect::<Result<_>>()?;
    let (min, max, step) = (nums[0], nums[1], nums[2]);
    ensure!(
        min.is_finite() && max.is_finite() && step.is_finite(),
        "beta-range entries must be finite"
    );
    ensure!(min >= 0.0, "beta-range minimum must be nonnegative");
    ensure!(min < max, "beta-range needs min < max");
    ensure!(step > 0.0, "beta-range needs step > 0");
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + i as f64 * step).collect())
}
