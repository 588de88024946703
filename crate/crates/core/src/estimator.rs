//! Shifted Hayashi-Yoshida correlation contrast and the lead-lag estimator.
//!
//! For `θ̃ ≥ 0`
//!
//! ```text
//! U(θ̃) = Σ_{i: Ī¹_i ≤ T} Σ_j ΔX¹_i ΔX²_j 1{I¹_i ∩ (I²_j - θ̃) ≠ ∅}
//!        / ( √Σ_{i: Ī¹_i ≤ T} (ΔX¹_i)² · √Σ_j (ΔX²_j)² )
//! ```
//!
//! and for `θ̃ < 0` the restriction `Ī ≤ T` moves to the second component
//! and the first one is shifted, `(I¹_i + θ̃) ∩ I²_j`. Intervals are
//! half-open `(a, b]`, so touching intervals do not overlap. `U = 0` when
//! either component has no variation on its intervals ending at or
//! before `T`.
//!
//! Nothing here depends on the Hurst parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{GridSpec, ObservationSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastOptions {
    /// Restrict both denominator sums to intervals ending at or before
    /// `T`. Off by default; for sensitivity analysis only.
    #[serde(default)]
    pub symmetric_denominator: bool,
    /// Evaluate grid points on the rayon pool. Results are identical.
    #[serde(default)]
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastCurve {
    pub grid_points: Vec<f64>,
    pub values: Vec<f64>,
    pub t_end: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub theta_hat: f64,
    /// Signed contrast at `theta_hat`.
    pub contrast_at_max: f64,
    /// Number of grid points attaining the maximal `|U|`.
    pub argmax_count: usize,
    pub curve: ContrastCurve,
}

/// Per-observation-set quantities shared by every grid point.
struct Prepared<'a> {
    obs: &'a ObservationSet,
    /// Number of intervals ending at or before `T`, per component.
    n1_t: usize,
    n2_t: usize,
    sq1_t: f64,
    sq1: f64,
    sq2_t: f64,
    sq2: f64,
}

fn squares(values: &[f64], upto: usize) -> (f64, f64) {
    let mut restricted = 0.0;
    let mut total = 0.0;
    for (k, w) in values.windows(2).enumerate() {
        let d = w[1] - w[0];
        total += d * d;
        if k < upto {
            restricted += d * d;
        }
    }
    (restricted, total)
}

impl<'a> Prepared<'a> {
    fn new(obs: &'a ObservationSet) -> Result<Self> {
        obs.validate()?;
        let t_end = obs.t_end;
        // times[0] = 0, so interval k ends at times[k+1]
        let n1_t = obs.times1[1..].partition_point(|&b| b <= t_end);
        let n2_t = obs.times2[1..].partition_point(|&b| b <= t_end);
        let (sq1_t, sq1) = squares(&obs.values1, n1_t);
        let (sq2_t, sq2) = squares(&obs.values2, n2_t);
        Ok(Self {
            obs,
            n1_t,
            n2_t,
            sq1_t,
            sq1,
            sq2_t,
            sq2,
        })
    }

    fn check(&self, theta: f64) -> Result<()> {
        if !(theta.is_finite() && theta.abs() <= self.obs.delta) {
            return Err(Error::domain(
                "theta_tilde",
                format!(
                    "{theta} lies outside [-delta, delta] = [-{0}, {0}]",
                    self.obs.delta
                ),
            ));
        }
        Ok(())
    }

    fn contrast(&self, theta: f64, options: ContrastOptions) -> f64 {
        if self.sq1_t == 0.0 || self.sq2_t == 0.0 {
            return 0.0;
        }
        let o = self.obs;
        let sym = options.symmetric_denominator;
        if theta >= 0.0 {
            let num = overlap_sum(
                &o.times1, &o.values1, self.n1_t, &o.times2, &o.values2, -theta,
            );
            let d2 = if sym { self.sq2_t } else { self.sq2 };
            num / (self.sq1_t.sqrt() * d2.sqrt())
        } else {
            let num = overlap_sum(
                &o.times2, &o.values2, self.n2_t, &o.times1, &o.values1, theta,
            );
            let d1 = if sym { self.sq1_t } else { self.sq1 };
            num / (d1.sqrt() * self.sq2_t.sqrt())
        }
    }
}

/// `Σ_{k < n_a} ΔA_k Σ_l ΔB_l 1{(ta_k, ta_{k+1}] ∩ (tb_l + shift, tb_{l+1} + shift] ≠ ∅}`.
///
/// The `l` overlapping interval `k` form a contiguous block whose ends
/// move forward with `k`, so the inner sum telescopes to a difference of
/// `B` values and the whole sum costs `O(N_a + N_b)`.
fn overlap_sum(ta: &[f64], va: &[f64], n_a: usize, tb: &[f64], vb: &[f64], shift: f64) -> f64 {
    let nb = tb.len() - 1;
    let mut lo = 0;
    let mut hi = 0;
    let mut sum = 0.0;
    for k in 0..n_a {
        let (a0, a1) = (ta[k], ta[k + 1]);
        // first l with tb[l+1] + shift > a0
        while lo < nb && !(tb[lo + 1] + shift > a0) {
            lo += 1;
        }
        // one past the last l with tb[l] + shift < a1
        while hi < nb && tb[hi] + shift < a1 {
            hi += 1;
        }
        if hi > lo {
            sum += (va[k + 1] - va[k]) * (vb[hi] - vb[lo]);
        }
    }
    sum
}

/// `U(θ̃)` for one shift. `|θ̃|` may not exceed `δ`.
pub fn hy_contrast(obs: &ObservationSet, theta_tilde: f64) -> Result<f64> {
    hy_contrast_with(obs, theta_tilde, ContrastOptions::default())
}

pub fn hy_contrast_with(
    obs: &ObservationSet,
    theta_tilde: f64,
    options: ContrastOptions,
) -> Result<f64> {
    let p = Prepared::new(obs)?;
    p.check(theta_tilde)?;
    Ok(p.contrast(theta_tilde, options))
}

/// `U` at every grid point.
pub fn contrast_curve(obs: &ObservationSet, grid: &GridSpec) -> Result<ContrastCurve> {
    contrast_curve_with(obs, grid, ContrastOptions::default())
}

pub fn contrast_curve_with(
    obs: &ObservationSet,
    grid: &GridSpec,
    options: ContrastOptions,
) -> Result<ContrastCurve> {
    let p = Prepared::new(obs)?;
    for &theta in &grid.points {
        p.check(theta)?;
    }
    let values = if options.parallel {
        grid.points
            .par_iter()
            .map(|&theta| p.contrast(theta, options))
            .collect()
    } else {
        grid.points
            .iter()
            .map(|&theta| p.contrast(theta, options))
            .collect()
    };
    Ok(ContrastCurve {
        grid_points: grid.points.clone(),
        values,
        t_end: obs.t_end,
        delta: obs.delta,
    })
}

impl ContrastCurve {
    /// Largest grid point maximizing `|U|`, with its multiplicity.
    pub fn argmax(&self) -> Result<EstimateResult> {
        if self.grid_points.is_empty() {
            return Err(Error::domain("grid", "must not be empty"));
        }
        let best = self
            .values
            .iter()
            .map(|v| v.abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let hits: Vec<usize> = (0..self.values.len())
            .filter(|&k| self.values[k].abs() == best)
            .collect();
        let at = hits
            .iter()
            .copied()
            .max_by(|&a, &b| self.grid_points[a].total_cmp(&self.grid_points[b]))
            .ok_or_else(|| Error::Numerical {
                step: 0,
                reason: "contrast has no finite maximum".into(),
            })?;
        Ok(EstimateResult {
            theta_hat: self.grid_points[at],
            contrast_at_max: self.values[at],
            argmax_count: hits.len(),
            curve: self.clone(),
        })
    }
}

/// The lead-lag estimate: the largest grid point maximizing `|U|`.
pub fn estimate_leadlag(obs: &ObservationSet, grid: &GridSpec) -> Result<EstimateResult> {
    estimate_leadlag_with(obs, grid, ContrastOptions::default())
}

pub fn estimate_leadlag_with(
    obs: &ObservationSet,
    grid: &GridSpec,
    options: ContrastOptions,
) -> Result<EstimateResult> {
    if grid.points.is_empty() {
        return Err(Error::domain("grid", "must not be empty"));
    }
    contrast_curve_with(obs, grid, options)?.argmax()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sync_obs() -> ObservationSet {
        let t = vec![0.0, 0.2, 0.5, 0.7, 1.0];
        let v = vec![0.0, 0.3, -0.1, 0.4, 0.2];
        ObservationSet::new(t.clone(), v.clone(), t, v, 1.0, 0.0).unwrap()
    }

    fn grid(points: Vec<f64>, delta: f64) -> GridSpec {
        GridSpec::from_points(points, delta).unwrap()
    }

    #[test]
    fn synchronous_identical_paths_give_one() {
        let obs = sync_obs();
        assert!((hy_contrast(&obs, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let curve = contrast_curve(&obs, &grid(vec![0.0], 0.0)).unwrap();
        assert_eq!(curve.values.len(), 1);
        assert!((curve.values[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_component_gives_zero() {
        let t = vec![0.0, 0.3, 0.6, 1.1];
        let obs = ObservationSet::new(
            t.clone(),
            vec![0.5; 4],
            t,
            vec![0.0, 1.0, -1.0, 2.0],
            1.0,
            0.1,
        )
        .unwrap();
        for th in [-0.1, -0.05, 0.0, 0.05, 0.1] {
            assert_eq!(hy_contrast(&obs, th).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_shifts_beyond_delta() {
        let t = vec![0.0, 0.3, 1.1];
        let obs = ObservationSet::new(
            t.clone(),
            vec![0.0, 1.0, 2.0],
            t,
            vec![0.0, 1.0, 0.0],
            1.0,
            0.1,
        )
        .unwrap();
        assert!(hy_contrast(&obs, 0.1).is_ok());
        assert!(hy_contrast(&obs, 0.11).is_err());
        assert!(hy_contrast(&obs, f64::NAN).is_err());
    }

    #[test]
    fn single_point_grid() {
        let obs = sync_obs();
        let est = estimate_leadlag(&obs, &grid(vec![0.0], 0.0)).unwrap();
        assert_eq!(est.theta_hat, 0.0);
        assert_eq!(est.argmax_count, 1);
    }

    #[test]
    fn ties_resolve_to_largest_point() {
        let curve = ContrastCurve {
            grid_points: vec![-0.01, 0.0, 0.01],
            values: vec![-0.5, 0.1, 0.5],
            t_end: 1.0,
            delta: 0.1,
        };
        let est = curve.argmax().unwrap();
        assert_eq!(est.theta_hat, 0.01);
        assert_eq!(est.argmax_count, 2);
        assert_eq!(est.contrast_at_max, 0.5);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let g = GridSpec {
            points: vec![],
            rho_n: 0.0,
            v_n: None,
        };
        assert!(estimate_leadlag(&sync_obs(), &g).is_err());
    }
}
