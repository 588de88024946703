//! Helpers shared by the contrast tests and the acceptance run.
#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;

use fraclead::rng::stream;
use fraclead::{GridSpec, ObservationSet};

/// `U(θ̃)` straight from its definition.
pub fn naive_contrast(obs: &ObservationSet, th: f64) -> f64 {
    let t = obs.t_end;
    let inc = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
    let (d1, d2) = (inc(&obs.values1), inc(&obs.values2));
    let (t1, t2) = (&obs.times1, &obs.times2);
    let mut num = 0.0;
    let (mut s1, mut s2) = (0.0, 0.0);
    if th >= 0.0 {
        for i in 0..d1.len() {
            if t1[i + 1] > t {
                continue;
            }
            s1 += d1[i] * d1[i];
            for j in 0..d2.len() {
                let (a2, b2) = (t2[j] - th, t2[j + 1] - th);
                if t1[i] < b2 && a2 < t1[i + 1] {
                    num += d1[i] * d2[j];
                }
            }
        }
        s2 = d2.iter().map(|d| d * d).sum();
        let s2_t: f64 = (0..d2.len())
            .filter(|&j| t2[j + 1] <= t)
            .map(|j| d2[j] * d2[j])
            .sum();
        if s1 == 0.0 || s2_t == 0.0 {
            return 0.0;
        }
        num / (s1.sqrt() * s2.sqrt())
    } else {
        for j in 0..d2.len() {
            if t2[j + 1] > t {
                continue;
            }
            s2 += d2[j] * d2[j];
            for i in 0..d1.len() {
                let (a1, b1) = (t1[i] + th, t1[i + 1] + th);
                if a1 < t2[j + 1] && t2[j] < b1 {
                    num += d1[i] * d2[j];
                }
            }
        }
        s1 = d1.iter().map(|d| d * d).sum();
        let s1_t: f64 = (0..d1.len())
            .filter(|&i| t1[i + 1] <= t)
            .map(|i| d1[i] * d1[i])
            .sum();
        if s1_t == 0.0 || s2 == 0.0 {
            return 0.0;
        }
        num / (s1.sqrt() * s2.sqrt())
    }
}

pub const T: f64 = 1.0;
pub const DELTA: f64 = 0.25;

/// Observation times on `[0, T+δ]` with at least one interval ending by
/// `T`. Dyadic instances put every time on multiples of 1/256, so shifted
/// endpoints touch exactly.
pub fn random_times<R: Rng>(rng: &mut R, intervals: usize, dyadic: bool) -> Vec<f64> {
    let end = T + DELTA;
    let mut inner: Vec<f64> = (0..intervals.saturating_sub(1))
        .map(|_| {
            if dyadic {
                rng.random_range(1..320u32) as f64 / 256.0
            } else {
                rng.random::<f64>() * end
            }
        })
        .collect();
    inner.push(if dyadic { 0.5 } else { rng.random::<f64>() * T });
    inner.sort_by(|a, b| a.total_cmp(b));
    inner.dedup();
    let mut times = vec![0.0];
    times.extend(inner.into_iter().filter(|&t| t > 0.0 && t < end));
    times.push(end);
    times
}

pub fn random_walk<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut x = 0.0;
    (0..len)
        .map(|k| {
            if k > 0 {
                x += rng.sample::<f64, _>(StandardNormal);
            }
            x
        })
        .collect()
}

pub struct Instance {
    pub obs: ObservationSet,
    pub grid: GridSpec,
}

/// `constant`: 0 for none, 1 or 2 to freeze that component.
pub fn instance(seed: u64, dyadic: bool, constant: u8) -> Instance {
    let mut rng = stream(seed);
    let n1 = rng.random_range(1..=200);
    let n2 = rng.random_range(1..=200);
    let times1 = random_times(&mut rng, n1, dyadic);
    let times2 = random_times(&mut rng, n2, dyadic);
    let mut values1 = random_walk(&mut rng, times1.len());
    let mut values2 = random_walk(&mut rng, times2.len());
    match constant {
        1 => values1.iter_mut().for_each(|v| *v = 0.7),
        2 => values2.iter_mut().for_each(|v| *v = -1.3),
        _ => {}
    }
    let count = rng.random_range(1..=50);
    let mut points: Vec<f64> = (0..count)
        .map(|_| {
            if dyadic {
                rng.random_range(-64..=64i32) as f64 / 256.0
            } else {
                (rng.random::<f64>() * 2.0 - 1.0) * DELTA
            }
        })
        .chain([0.0])
        .collect();
    points.sort_by(|a, b| a.total_cmp(b));
    points.dedup();
    Instance {
        obs: ObservationSet::new(times1, values1, times2, values2, T, DELTA).unwrap(),
        grid: GridSpec::from_points(points, DELTA).unwrap(),
    }
}
