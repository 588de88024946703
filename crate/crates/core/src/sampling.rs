//! Observation schemes, observation sets, assumption diagnostics and
//! candidate grids for the lead-lag parameter.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbm::HurstParam;
use crate::model::LatentPair;
use crate::rng;

/// How observation times of one component are produced on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeKind {
    /// `{(i/n)·horizon : i = 0..n}`.
    Equidistant {
        n: usize,
    },
    /// Arrivals of a Poisson process with the given rate per unit time.
    Poisson {
        intensity: f64,
    },
    Explicit {
        times: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingScheme {
    #[serde(flatten)]
    pub kind: SchemeKind,
    /// `T + δ`.
    pub horizon: f64,
}

impl SamplingScheme {
    pub fn equidistant(n: usize, horizon: f64) -> Self {
        Self {
            kind: SchemeKind::Equidistant { n },
            horizon,
        }
    }

    pub fn poisson(intensity: f64, horizon: f64) -> Self {
        Self {
            kind: SchemeKind::Poisson { intensity },
            horizon,
        }
    }

    pub fn explicit(times: Vec<f64>, horizon: f64) -> Self {
        Self {
            kind: SchemeKind::Explicit { times },
            horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::domain(
                "horizon",
                format!("{} must be positive", self.horizon),
            ));
        }
        match &self.kind {
            SchemeKind::Equidistant { n } if *n == 0 => {
                Err(Error::domain("n", "must be a positive integer"))
            }
            SchemeKind::Poisson { intensity } if !(intensity.is_finite() && *intensity > 0.0) => {
                Err(Error::domain(
                    "intensity",
                    format!("{intensity} must be positive"),
                ))
            }
            SchemeKind::Explicit { times } => check_time_grid("times", times, self.horizon),
            _ => Ok(()),
        }
    }
}

/// Strictly increasing, first time 0, last time `end`.
fn check_time_grid(field: &str, times: &[f64], end: f64) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::domain(field, "needs at least two times"));
    }
    if times[0] != 0.0 {
        return Err(Error::domain(
            field,
            format!("must start at 0, starts at {}", times[0]),
        ));
    }
    let last = times[times.len() - 1];
    if (last - end).abs() > 1e-12 * end.abs().max(1.0) {
        return Err(Error::domain(
            field,
            format!("must end at the horizon {end}, ends at {last}"),
        ));
    }
    for (i, w) in times.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::domain(
                field,
                format!("must strictly increase (index {})", i + 1),
            ));
        }
    }
    Ok(())
}

/// Observation times for one component. Poisson arrivals past the horizon
/// are dropped and the horizon itself is appended as the final time.
pub fn generate_times(scheme: &SamplingScheme, seed: u64) -> Result<Vec<f64>> {
    scheme.validate()?;
    let end = scheme.horizon;
    match &scheme.kind {
        SchemeKind::Equidistant { n } => {
            let n = *n;
            let mut times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64 * end).collect();
            times[n] = end;
            Ok(times)
        }
        SchemeKind::Poisson { intensity } => {
            let gaps =
                Exp::new(*intensity).map_err(|e| Error::domain("intensity", e.to_string()))?;
            let mut rng = rng::stream(seed);
            let mut times = vec![0.0];
            let mut t = 0.0;
            loop {
                t += gaps.sample(&mut rng);
                if t >= end {
                    break;
                }
                if t > times[times.len() - 1] {
                    times.push(t);
                }
            }
            times.push(end);
            Ok(times)
        }
        SchemeKind::Explicit { times } => Ok(times.clone()),
    }
}

/// Uniform observation times drawn with `rng`; used by tests and tools.
pub fn uniform_times<R: Rng>(rng: &mut R, count: usize, end: f64) -> Vec<f64> {
    let mut inner: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * end).collect();
    inner.sort_by(|a, b| a.total_cmp(b));
    inner.dedup();
    let mut times = vec![0.0];
    times.extend(inner.into_iter().filter(|&t| t > 0.0 && t < end));
    times.push(end);
    times
}

/// Non-synchronous observations of the pair on `[0, T+δ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    pub times1: Vec<f64>,
    pub values1: Vec<f64>,
    pub times2: Vec<f64>,
    pub values2: Vec<f64>,
    /// Analysis horizon `T`.
    pub t_end: f64,
    pub delta: f64,
}

impl ObservationSet {
    pub fn new(
        times1: Vec<f64>,
        values1: Vec<f64>,
        times2: Vec<f64>,
        values2: Vec<f64>,
        t_end: f64,
        delta: f64,
    ) -> Result<Self> {
        let obs = Self {
            times1,
            values1,
            times2,
            values2,
            t_end,
            delta,
        };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::structure(
                "T",
                format!("{} must be positive", self.t_end),
            ));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::structure(
                "delta",
                format!("{} must be nonnegative", self.delta),
            ));
        }
        let end = self.t_end + self.delta;
        for (name, times, values) in [
            ("times1", &self.times1, &self.values1),
            ("times2", &self.times2, &self.values2),
        ] {
            if times.len() != values.len() {
                return Err(Error::structure(
                    name,
                    format!("{} times but {} values", times.len(), values.len()),
                ));
            }
            check_time_grid(name, times, end).map_err(|e| match e {
                Error::Domain { field, reason } => Error::Structure { field, reason },
                other => other,
            })?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::structure(name, "values must be finite"));
            }
            if times[1] > self.t_end {
                return Err(Error::structure(
                    name,
                    format!(
                        "no observation interval ends at or before T = {}; the index sets \
                         {{i : interval end <= T}} must have a common element",
                        self.t_end
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.t_end + self.delta
    }
}

/// Package latent values as observations on `[0, T+δ]`.
pub fn observe(latent: &LatentPair, t_end: f64, delta: f64) -> Result<ObservationSet> {
    ObservationSet::new(
        latent.times1.clone(),
        latent.values1.clone(),
        latent.times2.clone(),
        latent.values2.clone(),
        t_end,
        delta,
    )
}

/// Read a path sampled on `path_times` at the scheme times: each time is
/// moved to the first path time at or after it, and duplicates collapse.
pub fn sample_path(
    path_times: &[f64],
    path_values: &[f64],
    times: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if path_times.len() != path_values.len() || path_times.is_empty() {
        return Err(Error::structure(
            "path",
            "times and values must be nonempty and of equal length",
        ));
    }
    let mut out_t: Vec<f64> = Vec::with_capacity(times.len());
    let mut out_v = Vec::with_capacity(times.len());
    let last = path_times[path_times.len() - 1];
    for &t in times {
        let k = path_times.partition_point(|&p| p < t);
        if k == path_times.len() {
            return Err(Error::domain(
                "times",
                format!("{t} lies past the end of the path at {last}"),
            ));
        }
        if out_t.last() != Some(&path_times[k]) {
            out_t.push(path_times[k]);
            out_v.push(path_values[k]);
        }
    }
    Ok((out_t, out_v))
}

/// Finite-sample statistics behind the sampling assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub b2_ratio_1: f64,
    pub b2_ratio_2: f64,
    pub b3_ratio_1: f64,
    pub b3_ratio_2: f64,
    pub b4_value: f64,
    /// Largest interval length over both components.
    pub r_n: f64,
}

/// Compute the diagnostics for observation times `times1`, `times2`.
///
/// * `b2_ratio_l = Σ_{Ī≤T, I̲≥ε} |I^l|^{H1+H2} / (√Σ|I¹|^{2H1} √Σ|I²|^{2H2})`
/// * `b3_ratio_l = r_n^{2H_l-1+μ} / Σ_{Ī≤T} |I^l|^{2H_l}`
/// * `b4_value = v_n^{2-(H1∨H2)} (#I¹ + #I²)`
#[allow(clippy::too_many_arguments)]
pub fn diagnostics(
    times1: &[f64],
    times2: &[f64],
    h1: HurstParam,
    h2: HurstParam,
    t_end: f64,
    epsilon: f64,
    mu: f64,
    v_n: f64,
) -> Result<Diagnostics> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::domain("T", format!("{t_end} must be positive")));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(
            "epsilon",
            format!("{epsilon} must be nonnegative"),
        ));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::domain("mu", format!("{mu} must be positive")));
    }
    if !(v_n.is_finite() && v_n > 0.0) {
        return Err(Error::domain("v_n", format!("{v_n} must be positive")));
    }
    for (name, times) in [("times1", times1), ("times2", times2)] {
        if times.len() < 2 || times[0] != 0.0 {
            return Err(Error::domain(
                name,
                "needs at least two times starting at 0",
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain(name, "must strictly increase"));
        }
    }
    let (a, b) = (h1.value(), h2.value());
    let power_sum =
        |times: &[f64], p: f64| -> f64 { times.windows(2).map(|w| (w[1] - w[0]).powf(p)).sum() };
    let eligible = |times: &[f64], lower: f64, p: f64| -> f64 {
        times
            .windows(2)
            .filter(|w| w[1] <= t_end && w[0] >= lower)
            .map(|w| (w[1] - w[0]).powf(p))
            .sum()
    };
    let norm = power_sum(times1, 2.0 * a).sqrt() * power_sum(times2, 2.0 * b).sqrt();
    let r_n = times1
        .windows(2)
        .chain(times2.windows(2))
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);

    let b3 = |name: &str, times: &[f64], h: f64| -> Result<f64> {
        let denom = eligible(times, f64::NEG_INFINITY, 2.0 * h);
        if denom == 0.0 {
            return Err(Error::structure(
                name,
                format!("no interval ends at or before T = {t_end}"),
            ));
        }
        Ok(r_n.powf(2.0 * h - 1.0 + mu) / denom)
    };

    Ok(Diagnostics {
        b2_ratio_1: eligible(times1, epsilon, a + b) / norm,
        b2_ratio_2: eligible(times2, epsilon, a + b) / norm,
        b3_ratio_1: b3("times1", times1, a)?,
        b3_ratio_2: b3("times2", times2, b)?,
        b4_value: v_n.powf(2.0 - a.max(b)) * ((times1.len() - 1) + (times2.len() - 1)) as f64,
        r_n,
    })
}

/// Recipe for a candidate grid of lead-lag values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridVariant {
    /// `{k·step : k ∈ Z} ∩ [-δ, δ]`.
    Affine { step: f64 },
    /// Affine with `step = v_n^{2-(H1∨H2)+ε}`.
    RateGrid {
        v_n: f64,
        h1: HurstParam,
        h2: HurstParam,
        epsilon_exp: f64,
    },
}

impl GridVariant {
    pub fn step(&self) -> Result<f64> {
        let step = match *self {
            GridVariant::Affine { step } => step,
            GridVariant::RateGrid {
                v_n,
                h1,
                h2,
                epsilon_exp,
            } => {
                if !(v_n.is_finite() && v_n > 0.0) {
                    return Err(Error::domain("v_n", format!("{v_n} must be positive")));
                }
                if !(epsilon_exp.is_finite() && epsilon_exp > 0.0) {
                    return Err(Error::domain(
                        "epsilon_exp",
                        format!("{epsilon_exp} must be positive"),
                    ));
                }
                v_n.powf(2.0 - h1.max(h2).value() + epsilon_exp)
            }
        };
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::domain("step", format!("{step} must be positive")));
        }
        Ok(step)
    }
}

/// Candidate lead-lag values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: Vec<f64>,
    /// Covering radius of `[-δ, δ]`.
    pub rho_n: f64,
    pub v_n: Option<f64>,
}

impl GridSpec {
    /// Validate an explicit grid: strictly increasing, inside `[-δ, δ]`,
    /// containing 0.
    pub fn from_points(points: Vec<f64>, delta: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid", "must not be empty"));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("grid", "points must strictly increase"));
        }
        if let Some(p) = points.iter().find(|p| !(p.abs() <= delta)) {
            return Err(Error::domain(
                "grid",
                format!("point {p} lies outside [-{delta}, {delta}]"),
            ));
        }
        if !points.contains(&0.0) {
            return Err(Error::domain("grid", "must contain 0"));
        }
        let rho_n = covering_radius(&points, delta);
        Ok(Self {
            points,
            rho_n,
            v_n: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn covering_radius(points: &[f64], delta: f64) -> f64 {
    let inner = points
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]))
        .fold(0.0, f64::max);
    inner
        .max(points[0] + delta)
        .max(delta - points[points.len() - 1])
}

/// Build the grid `{k·step} ∩ [-δ, δ]`. Points are exact multiples
/// `k as f64 * step`, so 0 is always present.
pub fn build_grid(variant: &GridVariant, delta: f64) -> Result<GridSpec> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::domain("delta", format!("{delta} must be positive")));
    }
    let step = variant.step()?;
    if step >= 2.0 * delta {
        return Err(Error::domain(
            "step",
            format!("{step} cannot cover (-{delta}, {delta})"),
        ));
    }
    // tolerate δ/step landing a hair below an integer
    let k_max = (delta / step * (1.0 + 1e-12)).floor() as i64;
    let points: Vec<f64> = (-k_max..=k_max)
        .map(|k| k as f64 * step)
        .map(|p| p.clamp(-delta, delta))
        .collect();
    let rho_n = covering_radius(&points, delta);
    let v_n = match *variant {
        GridVariant::RateGrid { v_n, .. } => Some(v_n),
        GridVariant::Affine { .. } => None,
    };
    Ok(GridSpec { points, rho_n, v_n })
}
