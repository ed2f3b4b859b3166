//! Scenario files.
//!
//! ```toml
//! amplitudes = [1.0, 3.0]   # intensities |A₁|², |A₂|²
//! seed = 7
//! output = "sweep.csv"
//!
//! [phases]                  # radians
//! theta1 = 0.5
//! phi2 = -0.25
//!
//! [sweep]
//! variable = "delta"        # theta1 | theta2 | phi1 | phi2 | delta
//! start = 0.0
//! stop = 6.283185307179586
//! points = 9
//! ```
//!
//! Every key is optional. Unknown keys are rejected.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use classent_core::bench::{PhaseSetting, SourceSpec, DEFAULT_OMEGA_1, DEFAULT_OMEGA_2};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid scenario: {0}")]
    Parse(String),
    #[error("invalid override `{0}`: expected key=value")]
    Override(String),
    #[error("{key}: {message}")]
    Range { key: &'static str, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Theta1,
    Theta2,
    Phi1,
    Phi2,
    Delta,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Theta1 => "theta1",
            SweepVariable::Theta2 => "theta2",
            SweepVariable::Phi1 => "phi1",
            SweepVariable::Phi2 => "phi2",
            SweepVariable::Delta => "delta",
        }
    }

    /// `base` with this variable set to `value`. A `delta` sweep moves `θ₁`.
    pub fn apply(&self, base: &PhaseSetting, value: f64) -> PhaseSetting {
        let mut ps = *base;
        match self {
            SweepVariable::Theta1 => ps.theta1 = value,
            SweepVariable::Theta2 => ps.theta2 = value,
            SweepVariable::Phi1 => ps.phi1 = value,
            SweepVariable::Phi2 => ps.phi2 = value,
            SweepVariable::Delta => ps.theta1 = value - ps.phi1 + ps.theta2 + ps.phi2,
        }
        ps
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    /// Evenly spaced values including both endpoints.
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + span * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawPhases {
    theta1: f64,
    theta2: f64,
    phi1: f64,
    phi2: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawScenario {
    amplitudes: [f64; 2],
    phases: RawPhases,
    sweep: Option<Sweep>,
    seed: u64,
    output: Option<PathBuf>,
}

impl Default for RawScenario {
    fn default() -> Self {
        Self {
            amplitudes: [1.0, 1.0],
            phases: RawPhases::default(),
            sweep: None,
            seed: 0,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// `(|A₁|², |A₂|²)`.
    pub intensities: (f64, f64),
    pub phases: PhaseSetting,
    pub sweep: Option<Sweep>,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            intensities: (1.0, 1.0),
            phases: PhaseSetting::zero(),
            sweep: None,
            seed: 0,
            output: None,
        }
    }
}

impl Scenario {
    pub fn sources(&self) -> (SourceSpec, SourceSpec) {
        let (i1, i2) = self.intensities;
        (
            SourceSpec::from_intensity(i1, DEFAULT_OMEGA_1).expect("validated intensity"),
            SourceSpec::from_intensity(i2, DEFAULT_OMEGA_2).expect("validated intensity"),
        )
    }
}

fn finite(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::Range {
            key,
            message: format!("must be finite, got {v}"),
        })
    }
}

fn validate(raw: RawScenario) -> Result<Scenario, ConfigError> {
    for (key, v) in [("amplitudes[0]", raw.amplitudes[0]), ("amplitudes[1]", raw.amplitudes[1])] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ConfigError::Range {
                key,
                message: format!("intensity must be > 0, got {v}"),
            });
        }
    }
    let p = raw.phases;
    let phases = PhaseSetting {
        theta1: finite("phases.theta1", p.theta1)?,
        theta2: finite("phases.theta2", p.theta2)?,
        phi1: finite("phases.phi1", p.phi1)?,
        phi2: finite("phases.phi2", p.phi2)?,
    };
    if let Some(s) = &raw.sweep {
        if s.points < 2 {
            return Err(ConfigError::Range {
                key: "sweep.points",
                message: format!("must be >= 2, got {}", s.points),
            });
        }
        finite("sweep.start", s.start)?;
        finite("sweep.stop", s.stop)?;
    }
    Ok(Scenario {
        intensities: (raw.amplitudes[0], raw.amplitudes[1]),
        phases,
        sweep: raw.sweep,
        seed: raw.seed,
        output: raw.output,
    })
}

/// Parse and validate scenario text, applying `key=value` overrides first.
/// Keys are dotted paths (`phases.theta1`); values use TOML syntax, and a
/// value that is not valid TOML is taken as a string.
pub fn parse_scenario_with(text: &str, overrides: &[String]) -> Result<Scenario, ConfigError> {
    let mut table = toml::Table::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::Override(item.clone()))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Override(item.clone()));
        }
        set_path(&mut table, key, parse_value(value.trim()))
            .map_err(|_| ConfigError::Override(item.clone()))?;
    }
    let raw: RawScenario = table
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    validate(raw)
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    parse_scenario_with(text, &[])
}

pub fn load_scenario(path: Option<&std::path::Path>, overrides: &[String]) -> Result<Scenario, ConfigError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
            path: p.to_path_buf(),
            source,
        })?,
        None => String::new(),
    };
    parse_scenario_with(&text, overrides)
}

fn parse_value(text: &str) -> toml::Value {
    toml::Table::from_str(&format!("v = {text}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(text.to_string()))
}

fn set_path(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), ()> {
    match key.split_once('.') {
        None => {
            table.insert(key.to_string(), value);
            Ok(())
        }
        Some((head, rest)) => {
            let entry = table
                .entry(head.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            match entry {
                toml::Value::Table(inner) => set_path(inner, rest, value),
                _ => Err(()),
            }
        }
    }
}
