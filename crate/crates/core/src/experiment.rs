//! Monte Carlo replication of the estimator across `(ρ, n)` cells.
//!
//! Each replication draws two independent Poisson observation schemes of
//! intensity `n` on `[0, T+δ]`, simulates the pure-fBM lead-lag pair
//! `dX^l = dB^l` at those times and records the estimate. Seeds are
//! derived from `(base_seed, ρ index, n index, replication)` and results
//! are merged in replication order, so reports do not depend on the
//! number of workers.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{estimate_leadlag_with, ContrastOptions, EstimateResult};
use crate::fbm::HurstParam;
use crate::model::{LatentSimulator, LeadLagModel};
use crate::rng::{self, label};
use crate::sampling::{build_grid, generate_times, observe, GridSpec, GridVariant, SamplingScheme};

fn default_replications() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub h1: HurstParam,
    pub h2: HurstParam,
    pub rhos: Vec<f64>,
    /// Poisson intensities `n`, per unit time, used for both components.
    pub intensities: Vec<u32>,
    pub theta: f64,
    pub delta: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub grid: GridVariant,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Driver cells over `[0, T+2δ]`; 4096 per unit time when absent.
    #[serde(default)]
    pub driver_m: Option<usize>,
    #[serde(default)]
    pub contrast: ContrastOptions,
}

impl ExperimentConfig {
    /// The simulation study: `H = (0.6, 0.7)`, `θ = 0.02`, `T = 1`,
    /// `δ = 1`, grid step `10⁻³`, `ρ ∈ {0.25, 0.5, 0.75}`,
    /// `n ∈ {100, 300, 500}`.
    pub fn study() -> Self {
        Self {
            h1: HurstParam::new(0.6).expect("valid"),
            h2: HurstParam::new(0.7).expect("valid"),
            rhos: vec![0.25, 0.5, 0.75],
            intensities: vec![100, 300, 500],
            theta: 0.02,
            delta: 1.0,
            t_end: 1.0,
            grid: GridVariant::Affine { step: 1e-3 },
            replications: default_replications(),
            base_seed: 0,
            driver_m: None,
            contrast: ContrastOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain("replications", "must be at least 1"));
        }
        if self.rhos.is_empty() {
            return Err(Error::domain("rhos", "must not be empty"));
        }
        if self.intensities.is_empty() || self.intensities.contains(&0) {
            return Err(Error::domain(
                "intensities",
                "must be a nonempty list of positive integers",
            ));
        }
        for &rho in &self.rhos {
            self.model(rho)?;
        }
        self.grid_spec()?;
        Ok(())
    }

    pub fn model(&self, rho: f64) -> Result<LeadLagModel> {
        let mut model =
            LeadLagModel::pure_fbm(self.h1, self.h2, rho, self.theta, self.delta, self.t_end)?;
        model.driver_m = self.driver_m;
        model.validate()?;
        Ok(model)
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        build_grid(&self.grid, self.delta)
    }

    /// Seed of replication `r` in cell `(rho_index, n_index)`.
    pub fn replication_seed(&self, rho_index: usize, n_index: usize, r: usize) -> u64 {
        rng::derive_path(
            self.base_seed,
            &[rho_index as u64, n_index as u64, r as u64],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single estimate.
    pub stdev: f64,
    pub within_1_step: f64,
    pub within_2_steps: f64,
}

/// Summary statistics of `estimates` around `theta`. Distances are
/// compared to `k·step` with a relative slack of `1e-9` so that grid
/// points one step away count despite rounding.
pub fn summarize(estimates: &[f64], theta: f64, step: f64) -> Result<Summary> {
    if estimates.is_empty() {
        return Err(Error::domain("estimates", "must not be empty"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain("step", format!("{step} must be positive")));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let mut sorted = estimates.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let stdev = if estimates.len() > 1 {
        (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let within = |k: f64| {
        let tol = k * step * (1.0 + 1e-9);
        estimates
            .iter()
            .filter(|e| (*e - theta).abs() <= tol)
            .count() as f64
            / n
    };
    Ok(Summary {
        count: estimates.len(),
        mean,
        median,
        stdev,
        within_1_step: within(1.0),
        within_2_steps: within(2.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub rho: f64,
    pub n: u32,
    pub seeds: Vec<u64>,
    pub estimates: Vec<f64>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
    pub wall_time_secs: f64,
}

/// One replication: Poisson times of intensity `n` for both components,
/// the latent pair at those times, and the estimate over `grid`.
pub fn replicate(
    sim: &LatentSimulator,
    grid: &GridSpec,
    n: u32,
    seed: u64,
    options: ContrastOptions,
) -> Result<EstimateResult> {
    let model = sim.model();
    let horizon = model.observation_horizon();
    let scheme = SamplingScheme::poisson(f64::from(n), horizon);
    let times1 = generate_times(&scheme, rng::derive_seed(seed, label::TIMES_1))?;
    let times2 = generate_times(&scheme, rng::derive_seed(seed, label::TIMES_2))?;
    let latent = sim.simulate(&times1, &times2, rng::derive_seed(seed, label::PATH))?;
    let obs = observe(&latent, model.horizon_t, model.delta)?;
    estimate_leadlag_with(&obs, grid, options)
}

/// Run every cell on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_cells(config)
}

/// Run every cell on a dedicated pool of `jobs` workers.
pub fn run_experiment_with_jobs(
    config: &ExperimentConfig,
    jobs: usize,
) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain("jobs", e.to_string()))?;
    pool.install(|| run_cells(config))
}

fn run_cells(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let grid = config.grid_spec()?;
    let step = config.grid.step()?;
    let mut cells = Vec::with_capacity(config.rhos.len() * config.intensities.len());
    for (ri, &rho) in config.rhos.iter().enumerate() {
        let sim = LatentSimulator::new(config.model(rho)?)?;
        for (ni, &n) in config.intensities.iter().enumerate() {
            let seeds: Vec<u64> = (0..config.replications)
                .map(|r| config.replication_seed(ri, ni, r))
                .collect();
            let estimates = seeds
                .par_iter()
                .enumerate()
                .map(|(r, &seed)| {
                    replicate(&sim, &grid, n, seed, config.contrast)
                        .map(|e| e.theta_hat)
                        .map_err(|e| {
                            e.context(format!("cell rho = {rho}, n = {n}, replication {r}"))
                        })
                })
                .collect::<Result<Vec<f64>>>()?;
            log::info!(
                "cell rho = {rho}, n = {n}: {} replications done",
                estimates.len()
            );
            let summary = summarize(&estimates, config.theta, step)?;
            cells.push(CellReport {
                rho,
                n,
                seeds,
                estimates,
                summary,
            });
        }
    }
    Ok(ExperimentReport {
        config: config.clone(),
        cells,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_constant_estimates() {
        let s = summarize(&[0.02, 0.02, 0.02], 0.02, 1e-3).unwrap();
        assert_eq!(s.within_1_step, 1.0);
        assert_eq!(s.stdev, 0.0);
        assert_eq!(s.median, 0.02);
    }

    #[test]
    fn summary_one_step_either_side() {
        let s = summarize(&[0.019, 0.021], 0.02, 1e-3).unwrap();
        assert_eq!(s.within_1_step, 1.0);
        assert!((s.mean - 0.02).abs() < 1e-15);
        let s = summarize(&[0.0, 0.017, 0.02, 0.5], 0.02, 1e-3).unwrap();
        assert_eq!(s.within_1_step, 0.25);
        assert_eq!(s.within_2_steps, 0.25);
        assert!((s.median - 0.0185).abs() < 1e-15);
    }

    #[test]
    fn summary_rejects_empty() {
        assert!(summarize(&[], 0.02, 1e-3).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::study();
        assert!(c.validate().is_ok());
        c.replications = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::study();
        c.theta = 1.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::study();
        c.rhos = vec![1.5];
        assert!(c.validate().is_err());
    }

    #[test]
    fn seeds_are_distinct_across_cells() {
        let c = ExperimentConfig::study();
        let a = c.replication_seed(0, 1, 2);
        assert_ne!(a, c.replication_seed(1, 0, 2));
        assert_ne!(a, c.replication_seed(0, 1, 3));
        assert_eq!(a, c.replication_seed(0, 1, 2));
    }

    #[test]
    fn small_run_is_deterministic() {
        let mut c = ExperimentConfig::study();
        c.rhos = vec![0.5];
        c.intensities = vec![50];
        c.replications = 3;
        c.delta = 0.1;
        c.grid = GridVariant::Affine { step: 0.01 };
        c.driver_m = Some(1200);
        let a = run_experiment_with_jobs(&c, 1).unwrap();
        let b = run_experiment_with_jobs(&c, 3).unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.cells[0].estimates.len(), 3);
    }
}
