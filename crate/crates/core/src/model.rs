//! Lead-lag latent processes driven by the correlated pair.
//!
//! For `θ ≥ 0`
//!
//! ```text
//! X¹_t = X¹_0 + σ₁ B¹_{t+θ} + A¹_t
//! X²_t = X²_0 + σ₂ B²_t     + A²_t
//! ```
//!
//! and for `θ < 0` the shift moves to the second component,
//! `X²_t = X²_0 + σ₂ B²_{t-θ} + A²_t`. Component labels never swap.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbm::{CorrelatedFbmSpec, DriverGrid, FbmPairSampler, HurstParam};

pub type DriftFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Drift of one component.
///
/// `Linear` and `Wick` are deterministic paths `A_t`; the latter is the
/// log-price drift `μt - σ²t^{2H}/2` of the fractional Black-Scholes model
/// under Wick-Itô-Skorokhod integration. `Callback` is an SDE drift
/// `b(t, x)`, integrated by explicit Euler along the driving fBM.
#[derive(Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriftSpec {
    #[default]
    None,
    Linear {
        mu: f64,
    },
    Wick {
        mu: f64,
        sigma: f64,
        h: HurstParam,
    },
    #[serde(skip)]
    Callback {
        b: DriftFn,
        /// Declared Lipschitz bound, reported only.
        lipschitz: f64,
    },
}

impl fmt::Debug for DriftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriftSpec::None => write!(f, "None"),
            DriftSpec::Linear { mu } => f.debug_struct("Linear").field("mu", mu).finish(),
            DriftSpec::Wick { mu, sigma, h } => f
                .debug_struct("Wick")
                .field("mu", mu)
                .field("sigma", sigma)
                .field("h", h)
                .finish(),
            DriftSpec::Callback { lipschitz, .. } => f
                .debug_struct("Callback")
                .field("lipschitz", lipschitz)
                .finish_non_exhaustive(),
        }
    }
}

impl DriftSpec {
    pub fn callback(b: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, lipschitz: f64) -> Self {
        DriftSpec::Callback {
            b: Arc::new(b),
            lipschitz,
        }
    }

    /// `A_t` for path drifts, `None` for SDE callbacks.
    pub fn path_value(&self, t: f64) -> Option<f64> {
        match self {
            DriftSpec::None => Some(0.0),
            DriftSpec::Linear { mu } => Some(mu * t),
            DriftSpec::Wick { mu, sigma, h } => {
                Some(mu * t - 0.5 * sigma * sigma * t.powf(2.0 * h.value()))
            }
            DriftSpec::Callback { .. } => None,
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let finite = match self {
            DriftSpec::None => true,
            DriftSpec::Linear { mu } => mu.is_finite(),
            DriftSpec::Wick { mu, sigma, .. } => mu.is_finite() && sigma.is_finite(),
            DriftSpec::Callback { lipschitz, .. } => lipschitz.is_finite() && *lipschitz >= 0.0,
        };
        if finite {
            Ok(())
        } else {
            Err(Error::domain(field, "drift parameters must be finite"))
        }
    }
}

/// The lead-lag model on `[0, T+δ]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeadLagModel {
    pub theta: f64,
    pub delta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    #[serde(default)]
    pub drift1: DriftSpec,
    #[serde(default)]
    pub drift2: DriftSpec,
    #[serde(default)]
    pub x0_1: f64,
    #[serde(default)]
    pub x0_2: f64,
    pub fbm: CorrelatedFbmSpec,
    /// Analysis horizon `T`.
    pub horizon_t: f64,
    /// Driver cell count; defaults to 4096 per unit of `fbm.horizon`.
    #[serde(default)]
    pub driver_m: Option<usize>,
}

impl LeadLagModel {
    /// `dX^l = dB^l` with lead `theta`, the fBM defined on `[0, T+2δ]`.
    pub fn pure_fbm(
        h1: HurstParam,
        h2: HurstParam,
        rho: f64,
        theta: f64,
        delta: f64,
        horizon_t: f64,
    ) -> Result<Self> {
        let fbm = CorrelatedFbmSpec::new(h1, h2, rho, horizon_t + 2.0 * delta)?;
        let model = Self {
            theta,
            delta,
            sigma1: 1.0,
            sigma2: 1.0,
            drift1: DriftSpec::None,
            drift2: DriftSpec::None,
            x0_1: 0.0,
            x0_2: 0.0,
            fbm,
            horizon_t,
            driver_m: None,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::domain(
                "delta",
                format!("{} must be positive", self.delta),
            ));
        }
        if !(self.theta.is_finite() && self.theta.abs() < self.delta) {
            return Err(Error::domain(
                "theta",
                format!("|{}| must be below delta = {}", self.theta, self.delta),
            ));
        }
        for (name, s) in [("sigma1", self.sigma1), ("sigma2", self.sigma2)] {
            if !(s.is_finite() && s != 0.0) {
                return Err(Error::domain(
                    name,
                    format!("{s} must be finite and nonzero"),
                ));
            }
        }
        for (name, x) in [("x0_1", self.x0_1), ("x0_2", self.x0_2)] {
            if !x.is_finite() {
                return Err(Error::domain(name, "must be finite"));
            }
        }
        if !(self.horizon_t.is_finite() && self.horizon_t > 0.0) {
            return Err(Error::domain(
                "horizon_t",
                format!("{} must be positive", self.horizon_t),
            ));
        }
        self.fbm.validate()?;
        let needed = self.horizon_t + 2.0 * self.delta;
        if self.fbm.horizon < needed * (1.0 - 1e-12) {
            return Err(Error::domain(
                "fbm.horizon",
                format!("{} must cover T + 2·delta = {needed}", self.fbm.horizon),
            ));
        }
        self.drift1.validate("drift1")?;
        self.drift2.validate("drift2")?;
        if let Some(m) = self.driver_m {
            DriverGrid::new(m, self.fbm.horizon)?;
        }
        Ok(())
    }

    pub fn observation_horizon(&self) -> f64 {
        self.horizon_t + self.delta
    }

    pub fn driver(&self) -> Result<DriverGrid> {
        match self.driver_m {
            Some(m) => DriverGrid::new(m, self.fbm.horizon),
            None => DriverGrid::with_default_resolution(self.fbm.horizon),
        }
    }

    /// Time shifts applied to the fBM arguments of each component.
    pub fn shifts(&self) -> (f64, f64) {
        if self.theta >= 0.0 {
            (self.theta, 0.0)
        } else {
            (0.0, -self.theta)
        }
    }
}

/// Latent values of `(X¹, X²)` at their observation times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentPair {
    pub times1: Vec<f64>,
    pub values1: Vec<f64>,
    pub times2: Vec<f64>,
    pub values2: Vec<f64>,
    pub seed: u64,
}

/// Reusable simulator for one model; the kernel tables and driver layout
/// are shared across calls.
#[derive(Debug, Clone)]
pub struct LatentSimulator {
    model: LeadLagModel,
    sampler: FbmPairSampler,
}

struct ComponentPlan {
    /// Times handed to the fBM sampler.
    fbm_times: Vec<f64>,
    /// Position of each requested time inside `fbm_times`.
    picks: Vec<usize>,
}

impl LatentSimulator {
    pub fn new(model: LeadLagModel) -> Result<Self> {
        model.validate()?;
        let sampler = FbmPairSampler::new(model.fbm, model.driver()?)?;
        Ok(Self { model, sampler })
    }

    pub fn model(&self) -> &LeadLagModel {
        &self.model
    }

    fn check_times(&self, name: &str, times: &[f64]) -> Result<()> {
        let end = self.model.observation_horizon();
        for (i, &t) in times.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0 && t <= end * (1.0 + 1e-12)) {
                return Err(Error::domain(
                    name,
                    format!("time {t} at index {i} is outside [0, T + delta = {end}]"),
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

    fn plan(&self, times: &[f64], shift: f64, drift: &DriftSpec) -> ComponentPlan {
        let shifted: Vec<f64> = times.iter().map(|&t| t + shift).collect();
        if !matches!(drift, DriftSpec::Callback { .. }) {
            let picks = (0..shifted.len()).collect();
            return ComponentPlan {
                fbm_times: shifted,
                picks,
            };
        }
        // Euler needs the path from 0 on a grid no coarser than the driver.
        let last = shifted.last().copied().unwrap_or(0.0);
        let step = self.sampler.driver().step();
        let cells = (last / step).ceil() as usize;
        let mut fine: Vec<f64> = (0..=cells)
            .map(|k| (k as f64 * step).min(last))
            .chain(shifted.iter().copied())
            .collect();
        fine.sort_by(|a, b| a.total_cmp(b));
        fine.dedup();
        let picks = shifted
            .iter()
            .map(|t| fine.partition_point(|x| x < t))
            .collect();
        ComponentPlan {
            fbm_times: fine,
            picks,
        }
    }

    pub fn simulate(&self, times1: &[f64], times2: &[f64], seed: u64) -> Result<LatentPair> {
        self.check_times("times1", times1)?;
        self.check_times("times2", times2)?;
        let m = &self.model;
        let (shift1, shift2) = m.shifts();
        let plan1 = self.plan(times1, shift1, &m.drift1);
        let plan2 = self.plan(times2, shift2, &m.drift2);
        let pair = self
            .sampler
            .sample(&plan1.fbm_times, &plan2.fbm_times, seed)?;

        let values1 = assemble(times1, &plan1, &pair.values1, &m.drift1, m.sigma1, m.x0_1)?;
        let values2 = assemble(times2, &plan2, &pair.values2, &m.drift2, m.sigma2, m.x0_2)?;
        Ok(LatentPair {
            times1: times1.to_vec(),
            values1,
            times2: times2.to_vec(),
            values2,
            seed,
        })
    }
}

fn assemble(
    times: &[f64],
    plan: &ComponentPlan,
    fbm_values: &[f64],
    drift: &DriftSpec,
    sigma: f64,
    x0: f64,
) -> Result<Vec<f64>> {
    match drift {
        DriftSpec::Callback { b, .. } => {
            let path = euler(b.as_ref(), sigma, x0, &plan.fbm_times, fbm_values)?;
            Ok(plan.picks.iter().map(|&i| path[i]).collect())
        }
        _ => Ok(times
            .iter()
            .zip(fbm_values)
            .map(|(&t, &b)| {
                // path drifts are always Some
                x0 + sigma * b + drift.path_value(t).unwrap_or(0.0)
            })
            .collect()),
    }
}

/// Simulate the lead-lag pair at the given observation times.
pub fn simulate_latent_pair(
    model: &LeadLagModel,
    times1: &[f64],
    times2: &[f64],
    seed: u64,
) -> Result<LatentPair> {
    LatentSimulator::new(model.clone())?.simulate(times1, times2, seed)
}

fn euler(
    b: &(dyn Fn(f64, f64) -> f64 + Send + Sync),
    sigma: f64,
    x0: f64,
    times: &[f64],
    fbm: &[f64],
) -> Result<Vec<f64>> {
    let mut path = Vec::with_capacity(times.len());
    let mut x = x0;
    path.push(x);
    for k in 0..times.len().saturating_sub(1) {
        let drift = b(times[k], x);
        if !drift.is_finite() {
            return Err(Error::Numerical {
                step: k,
                reason: format!("drift b({}, {x}) = {drift}", times[k]),
            });
        }
        x += drift * (times[k + 1] - times[k]) + sigma * (fbm[k + 1] - fbm[k]);
        if !x.is_finite() {
            return Err(Error::Numerical {
                step: k + 1,
                reason: format!("state {x} at t = {}", times[k + 1]),
            });
        }
        path.push(x);
    }
    Ok(path)
}

/// Explicit Euler for `X_t = x0 + ∫_0^t b(s, X_s) ds + σ B_t` on
/// `fine_times`, with `B` an fBM of Hurst index `h` simulated on
/// `[0, last time]` at the default driver resolution.
pub fn simulate_sde_euler(
    b: impl Fn(f64, f64) -> f64 + Send + Sync,
    sigma: f64,
    x0: f64,
    h: HurstParam,
    fine_times: &[f64],
    seed: u64,
) -> Result<Vec<f64>> {
    if fine_times.first() != Some(&0.0) {
        return Err(Error::structure("fine_times", "must start at 0"));
    }
    if fine_times.len() < 2 {
        return Err(Error::structure("fine_times", "needs at least two times"));
    }
    if !(sigma.is_finite() && x0.is_finite()) {
        return Err(Error::domain("sigma", "sigma and x0 must be finite"));
    }
    let horizon = *fine_times.last().unwrap_or(&0.0);
    let spec = CorrelatedFbmSpec::new(h, h, 1.0, horizon)?;
    let driver = DriverGrid::with_default_resolution(horizon)?;
    let pair = FbmPairSampler::new(spec, driver)?.sample(fine_times, &[], seed)?;
    euler(&b, sigma, x0, fine_times, &pair.values1)
}
