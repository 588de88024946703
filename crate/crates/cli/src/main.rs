//! `fraclead`: simulate, sample, estimate, diagnose and run experiments
//! from the command line. Set `FRACLEAD_LOG` (e.g. `info`) for progress
//! output on stderr.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fraclead::experiment::run_experiment_with_jobs;
use fraclead::io;
use fraclead::model::LatentSimulator;
use fraclead::rng::{derive_seed, label};
use fraclead::sampling::sample_path;
use fraclead::{
    diagnostics, estimate_leadlag, generate_times, run_experiment, Error, HurstParam,
    ObservationSet, Result,
};
use tempfile::NamedTempFile;

use config::{load, GridFile, SampleConfig, SimulateConfig};

#[derive(Parser)]
#[command(
    name = "fraclead",
    version,
    about = "Lead-lag estimation for correlated fractional Brownian motions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the latent pair on a uniform grid and write path.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Observe a simulated path at generated times; writes obs1.csv and obs2.csv.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        path_in: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Contrast curve and lead-lag estimate; writes curve.csv and estimate.json.
    Estimate {
        #[arg(long)]
        obs1: PathBuf,
        #[arg(long)]
        obs2: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print sampling diagnostics as JSON.
    Diagnose {
        #[arg(long)]
        obs1: PathBuf,
        #[arg(long)]
        obs2: PathBuf,
        #[arg(long)]
        h1: f64,
        #[arg(long)]
        h2: f64,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        vn: f64,
    },
    /// Run a Monte Carlo study; writes estimates.csv, summary.csv and manifest.json.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Output files staged next to their destination and renamed into place
/// together once every one of them has been written.
struct Staged {
    dir: PathBuf,
    files: Vec<(NamedTempFile, PathBuf)>,
}

impl Staged {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<&File>) -> Result<()>,
    ) -> Result<()> {
        let tmp = NamedTempFile::new_in(&self.dir)?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            f(&mut w)?;
            w.flush()?;
        }
        self.files.push((tmp, self.dir.join(name)));
        Ok(())
    }

    fn commit(self) -> Result<()> {
        for (tmp, dest) in self.files {
            tmp.persist(&dest).map_err(|e| Error::from(e.error))?;
            log::info!("wrote {}", dest.display());
        }
        Ok(())
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::from(e).context(format!("opening {}", path.display())))
}

fn read_obs(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    io::read_observations(open(path)?).map_err(|e| e.context(path.display().to_string()))
}

fn simulate(config: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let config: SimulateConfig = load(config)?;
    config.validate()?;
    let seed = seed.unwrap_or(config.seed);
    let times = config.times();
    let sim = LatentSimulator::new(config.model)?;
    let latent = sim.simulate(&times, &times, derive_seed(seed, label::PATH))?;
    let mut staged = Staged::new(out)?;
    staged.write("path.csv", |w| {
        io::write_path(w, &times, &latent.values1, &latent.values2)
    })?;
    staged.commit()
}

fn sample(config: &Path, path_in: &Path, out: &Path) -> Result<()> {
    let config: SampleConfig = load(config)?;
    config.validate()?;
    let (times, x1, x2) =
        io::read_path(open(path_in)?).map_err(|e| e.context(path_in.display().to_string()))?;
    let t1 = generate_times(&config.scheme1, derive_seed(config.seed, label::TIMES_1))?;
    let t2 = generate_times(&config.scheme2, derive_seed(config.seed, label::TIMES_2))?;
    let (t1, v1) = sample_path(&times, &x1, &t1)?;
    let (t2, v2) = sample_path(&times, &x2, &t2)?;
    let obs = ObservationSet::new(t1, v1, t2, v2, config.t_end, config.delta)?;
    let mut staged = Staged::new(out)?;
    staged.write("obs1.csv", |w| {
        io::write_observations(w, &obs.times1, &obs.values1)
    })?;
    staged.write("obs2.csv", |w| {
        io::write_observations(w, &obs.times2, &obs.values2)
    })?;
    staged.commit()
}

fn estimate(
    obs1: &Path,
    obs2: &Path,
    grid: &Path,
    t_end: f64,
    delta: f64,
    out: &Path,
) -> Result<()> {
    let (t1, v1) = read_obs(obs1)?;
    let (t2, v2) = read_obs(obs2)?;
    let obs = ObservationSet::new(t1, v1, t2, v2, t_end, delta)?;
    let grid = load::<GridFile>(grid)?.build(delta)?;
    let result = estimate_leadlag(&obs, &grid)?;
    log::info!(
        "theta_hat = {} ({} maximizers)",
        result.theta_hat,
        result.argmax_count
    );
    let mut staged = Staged::new(out)?;
    staged.write("curve.csv", |w| io::write_curve(w, &result.curve))?;
    staged.write("estimate.json", |w| io::write_json(w, &result))?;
    staged.commit()
}

#[allow(clippy::too_many_arguments)]
fn diagnose(
    obs1: &Path,
    obs2: &Path,
    h1: f64,
    h2: f64,
    t_end: f64,
    epsilon: f64,
    mu: f64,
    vn: f64,
) -> Result<()> {
    let h1 = HurstParam::new(h1).map_err(|e| e.context("h1"))?;
    let h2 = HurstParam::new(h2).map_err(|e| e.context("h2"))?;
    let (t1, _) = read_obs(obs1)?;
    let (t2, _) = read_obs(obs2)?;
    let d = diagnostics(&t1, &t2, h1, h2, t_end, epsilon, mu, vn)?;
    io::write_json(std::io::stdout().lock(), &d)
}

fn experiment(config: &Path, out: &Path, jobs: Option<usize>) -> Result<()> {
    let config = config::load_experiment(config)?;
    if jobs == Some(0) {
        return Err(Error::domain("jobs", "must be at least 1"));
    }
    let report = match jobs {
        Some(j) => run_experiment_with_jobs(&config, j)?,
        None => run_experiment(&config)?,
    };
    let mut staged = Staged::new(out)?;
    staged.write("estimates.csv", |w| io::write_estimates(w, &report))?;
    staged.write("summary.csv", |w| io::write_summary(w, &report))?;
    staged.write("manifest.json", |w| io::write_manifest(w, &report))?;
    staged.commit()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out, seed } => simulate(&config, &out, seed),
        Command::Sample {
            config,
            path_in,
            out,
        } => sample(&config, &path_in, &out),
        Command::Estimate {
            obs1,
            obs2,
            grid,
            t_end,
            delta,
            out,
        } => estimate(&obs1, &obs2, &grid, t_end, delta, &out),
        Command::Diagnose {
            obs1,
            obs2,
            h1,
            h2,
            t_end,
            epsilon,
            mu,
            vn,
        } => diagnose(&obs1, &obs2, h1, h2, t_end, epsilon, mu, vn),
        Command::Experiment { config, out, jobs } => experiment(&config, &out, jobs),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRACLEAD_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
