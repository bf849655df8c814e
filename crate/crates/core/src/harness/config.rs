use std::collections::BTreeSet;
use std::fmt::Display;
use std::str::FromStr;

use crate::array::ArrayConfig;
use crate::{Error, Result};

/// Keys accepted in a configuration file, in echo order.
pub const CONFIG_KEYS: [&str; 8] = [
    "n_antennas",
    "subarray_size",
    "n_subarrays",
    "left_subarrays",
    "theta0_deg",
    "snr_db_list",
    "snapshots_list",
    "spacing_wavelengths",
];

/// Parsed `key = value` run configuration. Missing keys keep the defaults of
/// the reference setup (`N = 1024`, `M = 8`, `K = 128`, `K_L = 32`,
/// `theta0 = 41 deg`, `L = 100`, SNR from -10 to 20 dB in 5 dB steps).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_antennas: usize,
    pub subarray_size: usize,
    pub n_subarrays: usize,
    pub left_subarrays: Vec<usize>,
    pub theta0_deg: f64,
    pub snr_db_list: Vec<f64>,
    pub snapshots_list: Vec<usize>,
    pub spacing_wavelengths: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_antennas: 1024,
            subarray_size: 8,
            n_subarrays: 128,
            left_subarrays: vec![32],
            theta0_deg: 41.0,
            snr_db_list: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            snapshots_list: vec![100],
            spacing_wavelengths: 0.5,
        }
    }
}

fn parse_scalar<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| {
        Error::InvalidConfig(format!("line {line}: cannot parse `{value}` for `{key}`"))
    })
}

fn parse_list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    let items = value
        .split(',')
        .map(|s| parse_scalar(key, s.trim(), line))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::InvalidConfig(format!("line {line}: `{key}` is empty")));
    }
    Ok(items)
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Parses `key = value` lines. `#` starts a comment; lists are
    /// comma-separated; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {line}: expected `key = value`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) && CONFIG_KEYS.contains(&key) {
                return Err(Error::InvalidConfig(format!("line {line}: duplicate key `{key}`")));
            }
            match key {
                "n_antennas" => cfg.n_antennas = parse_scalar(key, value, line)?,
                "subarray_size" => cfg.subarray_size = parse_scalar(key, value, line)?,
                "n_subarrays" => cfg.n_subarrays = parse_scalar(key, value, line)?,
                "left_subarrays" => cfg.left_subarrays = parse_list(key, value, line)?,
                "theta0_deg" => cfg.theta0_deg = parse_scalar(key, value, line)?,
                "snr_db_list" => cfg.snr_db_list = parse_list(key, value, line)?,
                "snapshots_list" => cfg.snapshots_list = parse_list(key, value, line)?,
                "spacing_wavelengths" => cfg.spacing_wavelengths = parse_scalar(key, value, line)?,
                other => {
                    return Err(Error::InvalidConfig(format!("line {line}: unknown key `{other}`")))
                }
            }
        }
        cfg.array_config()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta0_deg > 0.0 && self.theta0_deg < 180.0) {
            return Err(Error::InvalidConfig(format!(
                "theta0_deg must lie in (0, 180), got {}",
                self.theta0_deg
            )));
        }
        if self.snr_db_list.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig("snr_db_list entries must be finite".into()));
        }
        if self.snapshots_list.contains(&0) {
            return Err(Error::InvalidConfig("snapshots_list entries must be positive".into()));
        }
        for &q in &self.left_subarrays {
            if q > self.n_subarrays {
                return Err(Error::InvalidConfig(format!(
                    "left_subarrays entry {q} exceeds n_subarrays {}",
                    self.n_subarrays
                )));
            }
        }
        Ok(())
    }

    /// Geometry without a left part.
    pub fn array_config(&self) -> Result<ArrayConfig> {
        ArrayConfig::new(self.n_antennas, self.subarray_size, self.n_subarrays)?
            .with_spacing(self.spacing_wavelengths)
    }

    /// One `key=value` string per key, in [`CONFIG_KEYS`] order.
    pub fn echo(&self) -> Vec<String> {
        vec![
            format!("n_antennas={}", self.n_antennas),
            format!("subarray_size={}", self.subarray_size),
            format!("n_subarrays={}", self.n_subarrays),
            format!("left_subarrays={}", join(&self.left_subarrays)),
            format!("theta0_deg={}", self.theta0_deg),
            format!("snr_db_list={}", join(&self.snr_db_list)),
            format!("snapshots_list={}", join(&self.snapshots_list)),
            format!("spacing_wavelengths={}", self.spacing_wavelengths),
        ]
    }
}
