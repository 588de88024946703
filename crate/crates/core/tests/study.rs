//! Statistical behaviour of the estimator on simulated study data.

use fraclead::experiment::replicate;
use fraclead::model::LatentSimulator;
use fraclead::{run_experiment, ContrastOptions, DriftSpec, ExperimentConfig};
use rayon::prelude::*;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

#[test]
fn no_lead_lag_is_recovered() {
    let mut config = ExperimentConfig::study();
    config.theta = 0.0;
    config.rhos = vec![0.75];
    config.intensities = vec![500];
    config.replications = 50;
    config.base_seed = 40;
    let report = run_experiment(&config).unwrap();
    let med = median(report.cells[0].estimates.clone());
    assert!(med.abs() <= 1e-3 * (1.0 + 1e-9), "median {med}");
}

#[test]
fn majority_of_seeds_land_near_the_truth() {
    let mut config = ExperimentConfig::study();
    config.rhos = vec![0.5];
    config.intensities = vec![300];
    config.base_seed = 1000;
    let report = run_experiment(&config).unwrap();
    let est = &report.cells[0].estimates;
    let near = est
        .iter()
        .filter(|e| (*e - 0.02).abs() <= 2e-3 * (1.0 + 1e-9))
        .count();
    assert!(2 * near > est.len(), "{near} of {}", est.len());
}

fn drift_changes(rho: f64, n: u32, component: u8, mu: f64) -> usize {
    let config = ExperimentConfig::study();
    let grid = config.grid_spec().unwrap();
    let base = config.model(rho).unwrap();
    let mut drifted = base.clone();
    if component == 1 {
        drifted.drift1 = DriftSpec::Linear { mu };
    } else {
        drifted.drift2 = DriftSpec::Linear { mu };
    }
    let plain = LatentSimulator::new(base).unwrap();
    let with_drift = LatentSimulator::new(drifted).unwrap();
    (0..100u64)
        .into_par_iter()
        .filter(|&r| {
            let opts = ContrastOptions::default();
            let a = replicate(&plain, &grid, n, 7000 + r, opts).unwrap();
            let b = replicate(&with_drift, &grid, n, 7000 + r, opts).unwrap();
            a.theta_hat != b.theta_hat
        })
        .count()
}

// Weakly identified cells (rho <= 0.5) move more often under |mu| = 0.5,
// because their contrast maximum is nearly flat.
#[test]
fn strong_drift_rarely_moves_a_well_identified_estimate() {
    for (component, mu) in [(1, 0.5), (2, -0.5)] {
        let changed = drift_changes(0.75, 500, component, mu);
        assert!(
            changed <= 5,
            "component {component}: {changed} of 100 changed"
        );
    }
}

#[test]
fn mild_drift_rarely_moves_the_estimate() {
    for (component, mu) in [(1, 0.1), (2, -0.1)] {
        let changed = drift_changes(0.5, 300, component, mu);
        assert!(
            changed <= 5,
            "component {component}: {changed} of 100 changed"
        );
    }
}
