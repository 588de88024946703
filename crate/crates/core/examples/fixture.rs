//! Write the packaged observation fixture: one replication with
//! `H = (0.6, 0.7)`, `ρ = 0.5`, Poisson intensity 300, `θ = 0.02`, `T = 1`,
//! `δ = 1`, on the grid of step `10⁻³`.
//!
//! `cargo run --example fixture -- <seed> <out dir>`, or with `scan` as
//! the only argument, print the estimate for seeds 0..20.

use std::fs::File;

use fraclead::experiment::replicate;
use fraclead::io::write_observations;
use fraclead::model::LatentSimulator;
use fraclead::rng::{derive_seed, label};
use fraclead::sampling::{generate_times, observe, SamplingScheme};
use fraclead::{ContrastOptions, ExperimentConfig};

fn main() -> fraclead::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = ExperimentConfig::study();
    config.rhos = vec![0.5];
    let sim = LatentSimulator::new(config.model(0.5)?)?;
    let grid = config.grid_spec()?;
    if args.first().map(String::as_str) == Some("scan") {
        for seed in 0..20 {
            let est = replicate(&sim, &grid, 300, seed, ContrastOptions::default())?;
            println!("seed {seed}: theta_hat = {}", est.theta_hat);
        }
        return Ok(());
    }
    let seed: u64 = args.first().expect("seed").parse().expect("seed");
    let out = std::path::PathBuf::from(args.get(1).expect("output directory"));
    let scheme = SamplingScheme::poisson(300.0, 2.0);
    let times1 = generate_times(&scheme, derive_seed(seed, label::TIMES_1))?;
    let times2 = generate_times(&scheme, derive_seed(seed, label::TIMES_2))?;
    let latent = sim.simulate(&times1, &times2, derive_seed(seed, label::PATH))?;
    let obs = observe(&latent, 1.0, 1.0)?;
    write_observations(
        File::create(out.join("study_obs1.csv"))?,
        &obs.times1,
        &obs.values1,
    )?;
    write_observations(
        File::create(out.join("study_obs2.csv"))?,
        &obs.times2,
        &obs.values2,
    )?;
    let est = replicate(&sim, &grid, 300, seed, ContrastOptions::default())?;
    println!(
        "theta_hat = {}, |U| = {}",
        est.theta_hat,
        est.contrast_at_max.abs()
    );
    Ok(())
}
