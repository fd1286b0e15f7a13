use std::path::PathBuf;

use anyhow::{bail, Context};
use bmanova::ManovaParams64;
use serde::Deserialize;

use crate::CliError;

/// Grid `start, start + step, …` up to `stop` (inclusive within roundoff).
#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl GridSpec {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, step, stop] = parts[..] else {
            bail!("grid must be START:STEP:STOP, got {s:?}");
        };
        let num = |v: &str| v.trim().parse::<f64>().with_context(|| format!("bad grid number {v:?}"));
        Ok(Self {
            start: num(start)?,
            step: num(step)?,
            stop: num(stop)?,
        })
    }

    pub fn points(&self) -> anyhow::Result<Vec<f64>> {
        let Self { start, step, stop } = *self;
        if step.is_nan() || step <= 0.0 {
            bail!("grid step must be positive, got {step}");
        }
        if !(0.0 < start && start <= stop && stop < 1.0) {
            bail!("grid must satisfy 0 < start <= stop < 1, got {start}:{step}:{stop}");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            bail!("grid has {count} points; at most 1000000 allowed");
        }
        // Rounded so that "0.5:0.1:0.9" prints as 0.6, not 0.6000000000000001.
        Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
    }
}

fn default_alpha() -> f64 {
    0.01
}

/// JSON experiment description consumed by `verify`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub beta: f64,
    pub omega: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub grid: GridSpec,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid config: {e}")))
    }

    pub fn params(&self) -> Result<ManovaParams64, CliError> {
        ManovaParams64::new(self.m, self.n, self.p, self.beta, self.omega.clone()).map_err(CliError::from)
    }

    pub fn grid_points(&self) -> Result<Vec<f64>, CliError> {
        self.grid.points().map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_samples == 0 {
            return Err(CliError::usage("n_samples must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::usage(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

pub fn parse_omega(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad omega entry {v:?}")))
        .collect()
}
