//! Experiment configuration: a flat key-value map assembled from an optional
//! `key = value` file and command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{config_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    PngHeight,
    PngLayers,
    RmtEdge,
    RmtDyson,
    DistEval,
    DistJoint,
    Compare,
}

/// Keys every experiment accepts.
pub const SHARED_KEYS: &[&str] = &["seed", "workers", "out-path", "format", "quad-order"];

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::PngHeight,
        Experiment::PngLayers,
        Experiment::RmtEdge,
        Experiment::RmtDyson,
        Experiment::DistEval,
        Experiment::DistJoint,
        Experiment::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::PngHeight => "png-height",
            Experiment::PngLayers => "png-layers",
            Experiment::RmtEdge => "rmt-edge",
            Experiment::RmtDyson => "rmt-dyson",
            Experiment::DistEval => "dist-eval",
            Experiment::DistJoint => "dist-joint",
            Experiment::Compare => "compare",
        }
    }

    /// Experiment-specific keys.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::PngHeight => &["q", "alpha", "omega", "N", "samples", "tau", "scaling"],
            Experiment::PngLayers => &["q", "alpha", "omega", "N", "samples", "layers"],
            Experiment::RmtEdge => &[
                "ensemble", "N", "Lambda", "omega", "eps", "samples", "method", "scaling",
            ],
            Experiment::RmtDyson => &["N", "Lambda", "omega", "eps", "samples", "times", "scaling"],
            Experiment::DistEval => &["which", "s-grid", "omega", "tau", "N", "Lambda", "eps", "scaling"],
            Experiment::DistJoint => &["which", "s-grid", "times", "omega", "N", "Lambda", "eps", "scaling"],
            Experiment::Compare => &["input", "against", "column", "tau", "omega", "reference", "columns"],
        }
    }

    fn accepts(self, key: &str) -> bool {
        SHARED_KEYS.contains(&key) || self.keys().contains(&key)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Parse a flat `key = value` file. `#` starts a comment line. A key may
/// appear once.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return config_err(format!("line {}: expected key = value, got {line:?}", no + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return config_err(format!("line {}: empty key", no + 1));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return config_err(format!("line {}: duplicate key {k:?}", no + 1));
        }
    }
    Ok(map)
}

/// Expand `lo:hi:step` (inclusive of `hi` up to rounding), a comma list, or
/// a single number.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => parse_list(text),
        3 => {
            let [lo, hi, step] = [parts[0], parts[1], parts[2]].map(|p| parse_number(p.trim()));
            let (lo, hi, step) = (lo?, hi?, step?);
            if !(step > 0.0) || hi < lo {
                return config_err(format!("grid {text:?} needs lo <= hi and step > 0"));
            }
            let steps = (hi - lo) / step;
            let n = (steps + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return config_err(format!("grid {text:?} has more than 10^6 points"));
            }
            // snap away accumulated binary noise such as -5.949999999999999
            Ok((0..=n)
                .map(|i| {
                    let x = lo + step * i as f64;
                    (x * 1e12).round() / 1e12
                })
                .collect())
        }
        _ => config_err(format!("grid {text:?} is not of the form lo:hi:step")),
    }
}

/// Comma-separated reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|p| parse_number(p.trim())).collect()
}

fn parse_number(s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => config_err(format!("{s:?} is not a finite number")),
    }
}

/// A validated experiment name with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    experiment: Experiment,
    params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Rejects keys the experiment does not use.
    pub fn new(experiment: Experiment, params: BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = params.keys().find(|k| !experiment.accepts(k)) {
            return config_err(format!(
                "key {k:?} is not used by {experiment} (accepted: {})",
                SHARED_KEYS
                    .iter()
                    .chain(experiment.keys())
                    .copied()
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        Ok(Self { experiment, params })
    }

    /// File values (if any) overridden by `overrides`. A file may carry an
    /// `experiment` key, which must agree with `experiment`.
    pub fn load(
        experiment: Experiment,
        file: Option<&Path>,
        overrides: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self> {
        let mut params = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        if let Some(name) = params.remove("experiment") {
            if name.parse::<Experiment>()? != experiment {
                return config_err(format!("config file is for {name}, not {experiment}"));
            }
        }
        params.extend(overrides);
        Self::new(experiment, params)
    }

    /// Build from `(key, value)` pairs, mainly for tests.
    pub fn from_pairs(experiment: Experiment, pairs: &[(&str, &str)]) -> Result<Self> {
        Self::new(
            experiment,
            pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        )
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Result<Self> {
        self.params.insert(key.to_string(), value.into());
        Self::new(self.experiment, self.params)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| HarnessError::Config(format!("{} needs --{key}", self.experiment)))
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| HarnessError::Config(format!("{key} = {v:?} is not {what}"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse_number(v.trim())
                .map(Some)
                .map_err(|_| HarnessError::Config(format!("{key} = {v:?} is not a finite number"))),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.require(key)?;
        Ok(self.f64(key)?.unwrap())
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parsed(key, "a nonnegative integer")
    }

    pub fn require_usize(&self, key: &str) -> Result<usize> {
        self.require(key)?;
        Ok(self.usize(key)?.unwrap())
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(parse_list).transpose()
    }

    pub fn grid(&self, key: &str) -> Result<Vec<f64>> {
        parse_grid(self.require(key)?)
    }

    pub fn seed(&self) -> Result<u64> {
        Ok(self.parsed("seed", "a 64-bit unsigned integer")?.unwrap_or(0))
    }

    /// Defaults to the available parallelism.
    pub fn workers(&self) -> Result<usize> {
        let w = self.usize("workers")?.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        });
        if w == 0 {
            return config_err("workers must be at least 1");
        }
        Ok(w)
    }

    pub fn quad_order(&self) -> Result<usize> {
        let n = self
            .usize("quad-order")?
            .unwrap_or(kpzlab::fredholm::DEFAULT_QUAD_ORDER);
        if n < 8 {
            return config_err(format!("quad-order must be at least 8, got {n}"));
        }
        Ok(n)
    }

    pub fn format(&self) -> Result<Format> {
        match self.get("format") {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(f) => config_err(format!("format must be csv or json, got {f:?}")),
        }
    }

    pub fn out_path(&self) -> Option<PathBuf> {
        self.get("out-path").map(PathBuf::from)
    }

    /// Parameters that determine the data, i.e. everything except the worker
    /// count and output routing.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.params
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "workers" | "out-path" | "format"))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}
