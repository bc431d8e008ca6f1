//! Run configuration: a profile record plus a task block.
//!
//! ```json
//! {
//!   "n": 400,
//!   "family": {"kind": "rainbow", "h": 1.0},
//!   "task": {"fillings": [0.125, 0.4]}
//! }
//! ```
//!
//! The profile may instead live in its own file, referenced by
//! `"profile_file"` relative to the config's directory.

use std::path::{Path, PathBuf};

use chain_core::profiles::{load_custom, ContinuumProfile, LatticeProfile, ProfileRecord};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Spectrum,
    Density,
    FillingCurve,
    Wells,
    Envelope,
    Frequencies,
    Compare,
    Reproduce,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Density => "density",
            Self::FillingCurve => "filling-curve",
            Self::Wells => "wells",
            Self::Envelope => "envelope",
            Self::Frequencies => "frequencies",
            Self::Compare => "compare",
            Self::Reproduce => "reproduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Evenly spaced energies `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl EnergyGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        (0..self.points)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64)
            .collect()
    }
}

/// Task parameters; each task reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskParams {
    /// Filling fractions for density and compare.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fillings: Option<Vec<f64>>,
    /// Explicit energies for wells and frequencies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    /// Energy grid for the filling curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_grid: Option<EnergyGrid>,
    /// Zero-based mode indices for envelopes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<usize>>,
    /// Half-open site ranges `[start, end)` for block entropies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<[usize; 2]>>,
    /// Rényi order for block entropies; von Neumann when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub renyi_alpha: Option<f64>,
    /// Number of modes around the centre energy for localization counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Reproduction targets; all of them when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figures: Option<Vec<String>>,
}

/// A fully loaded run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// The configuration as read, echoed into output headers.
    pub echo: serde_json::Value,
    pub record: Option<ProfileRecord>,
    pub task: TaskParams,
}

/// The lattice and (when known) continuum profile of a run.
#[derive(Clone)]
pub struct Chain {
    pub lattice: LatticeProfile,
    pub continuum: Option<ContinuumProfile>,
}

impl Chain {
    pub fn continuum(&self, task: &str) -> Result<&ContinuumProfile, CliError> {
        self.continuum.as_ref().ok_or_else(|| {
            CliError::Config(format!(
                "task `{task}` needs a continuum profile; give a `family` or `expressions` block instead of `arrays`"
            ))
        })
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses a configuration; `base` resolves a relative `profile_file`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let echo: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        let mut obj = match echo.clone() {
            serde_json::Value::Object(m) => m,
            _ => {
                return Err(CliError::Config(
                    "the configuration must be a JSON object".into(),
                ))
            }
        };
        let task = match obj.remove("task") {
            Some(v) => serde_json::from_value(v)
                .map_err(|e| CliError::Config(format!("field `task`: {e}")))?,
            None => TaskParams::default(),
        };
        let profile_file = obj.remove("profile_file");
        let record = match profile_file {
            Some(serde_json::Value::String(p)) => {
                if !obj.is_empty() {
                    let keys: Vec<_> = obj.keys().cloned().collect();
                    return Err(CliError::Config(format!(
                        "`profile_file` cannot be combined with inline profile fields {keys:?}"
                    )));
                }
                let path: PathBuf = base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                Some(
                    ProfileRecord::from_json(&text)
                        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
                )
            }
            Some(_) => {
                return Err(CliError::Config(
                    "field `profile_file` must be a string".into(),
                ))
            }
            None if obj.is_empty() => None,
            None => Some(
                serde_json::from_value(serde_json::Value::Object(obj))
                    .map_err(|e| CliError::Config(format!("profile: {e}")))?,
            ),
        };
        Ok(Self { echo, record, task })
    }

    pub fn chain(&self) -> Result<Chain, CliError> {
        let record = self.record.as_ref().ok_or_else(|| {
            CliError::Config(
                "no profile given (expected `family`, `expressions`, `arrays` or `profile_file`)"
                    .into(),
            )
        })?;
        let (lattice, continuum) =
            load_custom(record).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Chain { lattice, continuum })
    }
}
