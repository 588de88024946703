//! How often a linear drift changes the estimate, per study cell.
//!
//! `cargo run --release --example drift_scan`

use fraclead::experiment::replicate;
use fraclead::model::LatentSimulator;
use fraclead::{ContrastOptions, DriftSpec, ExperimentConfig};
use rayon::prelude::*;

fn main() {
    let config = ExperimentConfig::study();
    let grid = config.grid_spec().unwrap();
    for rho in [0.25, 0.5, 0.75] {
        for n in [300u32, 500] {
            for (comp, mu) in [(1, 0.5), (2, -0.5), (1, 0.1)] {
                let base = config.model(rho).unwrap();
                let mut d = base.clone();
                if comp == 1 {
                    d.drift1 = DriftSpec::Linear { mu }
                } else {
                    d.drift2 = DriftSpec::Linear { mu }
                }
                let p = LatentSimulator::new(base).unwrap();
                let q = LatentSimulator::new(d).unwrap();
                let res: Vec<(f64, f64)> = (0..100u64)
                    .into_par_iter()
                    .map(|r| {
                        let o = ContrastOptions::default();
                        (
                            replicate(&p, &grid, n, 7000 + r, o).unwrap().theta_hat,
                            replicate(&q, &grid, n, 7000 + r, o).unwrap().theta_hat,
                        )
                    })
                    .collect();
                let changed = res.iter().filter(|(a, b)| a != b).count();
                let near = |x: f64| (x - 0.02).abs() <= 2.0000001e-3;
                let changed_near = res.iter().filter(|(a, b)| a != b && near(*a)).count();
                let lost = res.iter().filter(|(a, b)| near(*a) && !near(*b)).count();
                let maxmove = res
                    .iter()
                    .filter(|(a, _)| near(*a))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                println!("rho {rho} n {n} comp {comp} mu {mu}: changed {changed}, changed among near {changed_near}, near->far {lost}, max move among near {maxmove:.4}");
            }
        }
    }
}
