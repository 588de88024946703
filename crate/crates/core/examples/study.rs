//! Run one cell of the simulation study and print its summary.
//!
//! `cargo run --release --example study -- <rho> <n> [replications] [step] [seed]`

use fraclead::sampling::GridVariant;
use fraclead::{run_experiment, ExperimentConfig};

fn main() -> fraclead::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let mut config = ExperimentConfig::study();
    config.rhos = vec![arg(0, "0.75").parse().expect("rho")];
    config.intensities = vec![arg(1, "500").parse().expect("n")];
    config.replications = arg(2, "100").parse().expect("replications");
    config.grid = GridVariant::Affine {
        step: arg(3, "0.001").parse().expect("step"),
    };
    config.base_seed = arg(4, "0").parse().expect("seed");
    let report = run_experiment(&config)?;
    for cell in &report.cells {
        println!("rho = {}, n = {}: {:?}", cell.rho, cell.n, cell.summary);
    }
    println!("wall time {:.1} s", report.wall_time_secs);
    Ok(())
}
