//! TOML documents read by the subcommands.

use std::path::Path;

use fraclead::sampling::{GridVariant, SamplingScheme};
use fraclead::{build_grid, Error, ExperimentConfig, GridSpec, LeadLagModel, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn default_points() -> usize {
    2001
}

/// `simulate`: the model and the number of uniform path points on `[0, T+δ]`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_points")]
    pub points: usize,
    pub model: LeadLagModel,
}

impl SimulateConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.points < 3 {
            return Err(Error::domain(
                "points",
                format!("{} must be at least 3", self.points),
            ));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let end = self.model.observation_horizon();
        let last = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == last {
                    end
                } else {
                    end * k as f64 / last as f64
                }
            })
            .collect()
    }
}

/// `sample`: one sampling scheme per component.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub delta: f64,
    pub scheme1: SamplingScheme,
    pub scheme2: SamplingScheme,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::domain(
                "T",
                format!("{} must be positive", self.t_end),
            ));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::domain(
                "delta",
                format!("{} must be nonnegative", self.delta),
            ));
        }
        for (name, scheme) in [("scheme1", &self.scheme1), ("scheme2", &self.scheme2)] {
            scheme.validate().map_err(|e| e.context(name))?;
            let end = self.t_end + self.delta;
            if (scheme.horizon - end).abs() > 1e-12 * end {
                return Err(Error::domain(
                    format!("{name}.horizon"),
                    format!("{} differs from T + delta = {end}", scheme.horizon),
                ));
            }
        }
        Ok(())
    }
}

/// A grid file holds either a recipe or an explicit point list.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GridFile {
    Points { points: Vec<f64> },
    Variant(GridVariant),
}

impl GridFile {
    pub fn build(self, delta: f64) -> Result<GridSpec> {
        match self {
            GridFile::Points { points } => GridSpec::from_points(points, delta),
            GridFile::Variant(v) => build_grid(&v, delta),
        }
    }
}

pub fn load_experiment(path: &Path) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = load(path)?;
    config.validate()?;
    Ok(config)
}
