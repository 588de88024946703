use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{HurstParam, KernelTable};
use crate::error::{Error, Result};
use crate::rng;

/// Driver cells per unit of horizon used when no explicit count is given.
pub const DEFAULT_CELLS_PER_UNIT: usize = 4096;

/// Parameters of the correlated pair on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedFbmSpec {
    pub h1: HurstParam,
    pub h2: HurstParam,
    pub rho: f64,
    pub horizon: f64,
}

impl CorrelatedFbmSpec {
    pub fn new(h1: HurstParam, h2: HurstParam, rho: f64, horizon: f64) -> Result<Self> {
        let spec = Self {
            h1,
            h2,
            rho,
            horizon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho.abs() <= 1.0) {
            return Err(Error::domain(
                "rho",
                format!("{} is outside [-1, 1]", self.rho),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::domain(
                "horizon",
                format!("{} must be positive", self.horizon),
            ));
        }
        Ok(())
    }
}

/// Uniform discretization of `[0, horizon]` into `m` Brownian increments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriverGrid {
    pub m: usize,
    pub horizon: f64,
}

impl DriverGrid {
    pub fn new(m: usize, horizon: f64) -> Result<Self> {
        let grid = Self { m, horizon };
        grid.validate()?;
        Ok(grid)
    }

    /// `DEFAULT_CELLS_PER_UNIT` cells per unit of horizon, rounded up.
    pub fn with_default_resolution(horizon: f64) -> Result<Self> {
        let m = (DEFAULT_CELLS_PER_UNIT as f64 * horizon).ceil().max(2.0) as usize;
        Self::new(m, horizon)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::domain(
                "driver.m",
                format!("{} must be at least 2", self.m),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::domain(
                "driver.horizon",
                format!("{} must be positive", self.horizon),
            ));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.m as f64
    }

    pub fn midpoints(&self) -> Vec<f64> {
        let dt = self.step();
        (0..self.m).map(|k| (k as f64 + 0.5) * dt).collect()
    }
}

/// Values of `B¹` and `B²` at requested times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPathPair {
    pub times1: Vec<f64>,
    pub values1: Vec<f64>,
    pub times2: Vec<f64>,
    pub values2: Vec<f64>,
    pub seed: u64,
}

/// Reusable sampler for one `(spec, driver)` pair.
///
/// `B^l_t = Σ_k K_{H_l}(t, s_k) ΔW^l_k` with `s_k` the midpoint of driver
/// cell `k`, `ΔW¹ = ΔW̃¹` and `ΔW² = ρΔW̃¹ + sqrt(1-ρ²)ΔW̃²`. Each requested
/// time is evaluated independently, so a value never depends on which
/// other times were requested alongside it.
#[derive(Debug, Clone)]
pub struct FbmPairSampler {
    spec: CorrelatedFbmSpec,
    driver: DriverGrid,
    table1: Arc<KernelTable>,
    table2: Arc<KernelTable>,
    mids: Vec<f64>,
    mid_pow1: Vec<f64>,
    mid_pow2: Vec<f64>,
}

impl FbmPairSampler {
    pub fn new(spec: CorrelatedFbmSpec, driver: DriverGrid) -> Result<Self> {
        spec.validate()?;
        driver.validate()?;
        if (driver.horizon - spec.horizon).abs() > 1e-12 * spec.horizon {
            return Err(Error::domain(
                "driver.horizon",
                format!(
                    "{} does not match the fBM horizon {}",
                    driver.horizon, spec.horizon
                ),
            ));
        }
        let mids = driver.midpoints();
        let e1 = spec.h1.excess();
        let e2 = spec.h2.excess();
        let mid_pow1 = mids.iter().map(|s| s.powf(-e1)).collect();
        let mid_pow2 = mids.iter().map(|s| s.powf(-e2)).collect();
        Ok(Self {
            spec,
            driver,
            table1: KernelTable::shared(spec.h1),
            table2: KernelTable::shared(spec.h2),
            mids,
            mid_pow1,
            mid_pow2,
        })
    }

    pub fn spec(&self) -> &CorrelatedFbmSpec {
        &self.spec
    }

    pub fn driver(&self) -> &DriverGrid {
        &self.driver
    }

    fn check_times(&self, name: &str, times: &[f64]) -> Result<()> {
        for (i, &t) in times.iter().enumerate() {
            if !(t.is_finite() && (0.0..=self.spec.horizon).contains(&t)) {
                return Err(Error::domain(
                    name,
                    format!(
                        "time {t} at index {i} is outside [0, {}]",
                        self.spec.horizon
                    ),
                ));
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::structure(
                    name,
                    format!("times must strictly increase (index {i})"),
                ));
            }
        }
        Ok(())
    }

    /// A message when requested times are on average spaced more finely
    /// than the driver cells, in which case increments over those gaps are
    /// poorly resolved. Isolated short gaps, as in Poisson sampling, are
    /// not reported.
    pub fn resolution_warning(&self, times: &[f64]) -> Option<String> {
        if times.len() < 2 {
            return None;
        }
        let mean_gap = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        (mean_gap < self.driver.step()).then(|| {
            format!(
                "mean requested time gap {mean_gap:.3e} is below the driver step {:.3e} (m = {})",
                self.driver.step(),
                self.driver.m
            )
        })
    }

    /// Draw the driver noise for `seed`: `(ΔW¹, ΔW²)`.
    fn increments(&self, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let m = self.driver.m;
        let mut rng = rng::stream(seed);
        let z1: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let z2: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let sd = self.driver.step().sqrt();
        let rho = self.spec.rho;
        let rho_c = (1.0 - rho * rho).sqrt();
        let dw1 = z1.iter().map(|z| z * sd).collect();
        let dw2 = z1
            .iter()
            .zip(&z2)
            .map(|(a, b)| (rho * a + rho_c * b) * sd)
            .collect();
        (dw1, dw2)
    }

    pub fn sample(&self, times1: &[f64], times2: &[f64], seed: u64) -> Result<GaussianPathPair> {
        self.check_times("times1", times1)?;
        self.check_times("times2", times2)?;
        for times in [times1, times2] {
            if let Some(msg) = self.resolution_warning(times) {
                log::warn!("{msg}");
            }
        }
        let (dw1, dw2) = self.increments(seed);
        let values1 = times1
            .iter()
            .map(|&t| self.table1.wiener_sum(t, &self.mids, &self.mid_pow1, &dw1))
            .collect();
        let values2 = times2
            .iter()
            .map(|&t| self.table2.wiener_sum(t, &self.mids, &self.mid_pow2, &dw2))
            .collect();
        Ok(GaussianPathPair {
            times1: times1.to_vec(),
            values1,
            times2: times2.to_vec(),
            values2,
            seed,
        })
    }
}

/// One-shot convenience wrapper around [`FbmPairSampler`].
pub fn simulate_fbm_pair(
    spec: CorrelatedFbmSpec,
    times1: &[f64],
    times2: &[f64],
    driver: DriverGrid,
    seed: u64,
) -> Result<GaussianPathPair> {
    FbmPairSampler::new(spec, driver)?.sample(times1, times2, seed)
}
