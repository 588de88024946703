use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fraclead::io;
use fraclead::model::LatentSimulator;
use fraclead::rng::{derive_seed, label};
use fraclead::sampling::{sample_path, GridVariant, SamplingScheme};
use fraclead::{build_grid, estimate_leadlag, generate_times, LeadLagModel, ObservationSet};
use tempfile::TempDir;

fn fraclead(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclead"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    repo()
        .join("crates/core/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn config(name: &str) -> String {
    repo().join("configs").join(name).display().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map(|r| {
            r.map(|e| e.unwrap().file_name().into_string().unwrap())
                .collect()
        })
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn usage_errors_exit_2() {
    let o = fraclead(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = fraclead(&["estimate", "--obs1", "a.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fraclead(&["--help"]).status.code(), Some(0));
}

#[test]
fn estimate_on_study_fixture() {
    let out = TempDir::new().unwrap();
    let o = fraclead(&[
        "estimate",
        "--obs1",
        &fixture("study_obs1.csv"),
        "--obs2",
        &fixture("study_obs2.csv"),
        "--grid",
        &fixture("study_grid.toml"),
        "--T",
        "1",
        "--delta",
        "1",
        "--out",
        s(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(files_in(out.path()), ["curve.csv", "estimate.json"]);
    let curve = fs::read_to_string(out.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 2002);
    assert_eq!(curve.lines().next(), Some("theta_tilde,value"));
    let est: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("estimate.json")).unwrap())
            .unwrap();
    assert_eq!(est["theta_hat"].as_f64(), Some(0.02));
}

#[test]
fn explicit_grid_points_are_accepted() {
    let dir = TempDir::new().unwrap();
    let grid = dir.path().join("grid.toml");
    fs::write(&grid, "points = [-0.5, 0.0, 0.02, 0.5]\n").unwrap();
    let o = fraclead(&[
        "estimate",
        "--obs1",
        &fixture("study_obs1.csv"),
        "--obs2",
        &fixture("study_obs2.csv"),
        "--grid",
        s(&grid),
        "--T",
        "1",
        "--delta",
        "1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let curve = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 5);
}

#[test]
fn diagnose_equidistant_b2() {
    let dir = TempDir::new().unwrap();
    let n = 1000;
    let times = generate_times(&SamplingScheme::equidistant(n, 1.1), 0).unwrap();
    let values = vec![0.0; times.len()];
    let path = dir.path().join("eq.csv");
    io::write_observations(File::create(&path).unwrap(), &times, &values).unwrap();
    let o = fraclead(&[
        "diagnose",
        "--obs1",
        s(&path),
        "--obs2",
        s(&path),
        "--h1",
        "0.6",
        "--h2",
        "0.7",
        "--T",
        "1",
        "--epsilon",
        "0.1",
        "--mu",
        "0.05",
        "--vn",
        "0.001",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let d: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let b2 = d["b2_ratio_1"].as_f64().unwrap();
    assert!((b2 - 0.9 / 1.1).abs() <= 2.0 / n as f64, "b2 = {b2}");
    assert_eq!(d["b2_ratio_1"], d["b2_ratio_2"]);
}

#[test]
fn files_round_trip_matches_in_process_pipeline() {
    let dir = TempDir::new().unwrap();
    let d = s(dir.path());
    let o = fraclead(&[
        "simulate",
        "--config",
        &config("simulate.toml"),
        "--out",
        d,
        "--seed",
        "11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let path = dir.path().join("path.csv");
    let o = fraclead(&[
        "sample",
        "--config",
        &config("sample.toml"),
        "--path-in",
        s(&path),
        "--out",
        d,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (o1, o2) = (dir.path().join("obs1.csv"), dir.path().join("obs2.csv"));
    let o = fraclead(&[
        "estimate",
        "--obs1",
        s(&o1),
        "--obs2",
        s(&o2),
        "--grid",
        &config("grid_g1.toml"),
        "--T",
        "1",
        "--delta",
        "1",
        "--out",
        d,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let from_files: fraclead::EstimateResult =
        serde_json::from_str(&fs::read_to_string(dir.path().join("estimate.json")).unwrap())
            .unwrap();

    // the same pipeline without touching disk
    let doc: toml::Table =
        toml::from_str(&fs::read_to_string(config("simulate.toml")).unwrap()).unwrap();
    let model: LeadLagModel = doc["model"].clone().try_into().unwrap();
    let points = doc["points"].as_integer().unwrap() as usize;
    let end = model.observation_horizon();
    let times: Vec<f64> = (0..points)
        .map(|k| {
            if k == points - 1 {
                end
            } else {
                end * k as f64 / (points - 1) as f64
            }
        })
        .collect();
    let latent = LatentSimulator::new(model)
        .unwrap()
        .simulate(&times, &times, derive_seed(11, label::PATH))
        .unwrap();
    let scheme = SamplingScheme::poisson(300.0, 2.0);
    let t1 = generate_times(&scheme, derive_seed(7, label::TIMES_1)).unwrap();
    let t2 = generate_times(&scheme, derive_seed(7, label::TIMES_2)).unwrap();
    let (t1, v1) = sample_path(&times, &latent.values1, &t1).unwrap();
    let (t2, v2) = sample_path(&times, &latent.values2, &t2).unwrap();
    let obs = ObservationSet::new(t1, v1, t2, v2, 1.0, 1.0).unwrap();
    let grid = build_grid(&GridVariant::Affine { step: 1e-3 }, 1.0).unwrap();
    let in_process = estimate_leadlag(&obs, &grid).unwrap();

    assert_eq!(
        from_files.theta_hat.to_bits(),
        in_process.theta_hat.to_bits()
    );
    assert_eq!(
        from_files.contrast_at_max.to_bits(),
        in_process.contrast_at_max.to_bits()
    );
    assert_eq!(from_files.curve.values, in_process.curve.values);
    assert_eq!(from_files.curve.grid_points, in_process.curve.grid_points);
}

#[test]
fn validation_errors_name_the_field_and_leave_no_output() {
    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(config("simulate.toml")).unwrap();
    let cases = [
        (text.replace("theta = 0.02", "theta = 1.5"), "theta"),
        (text.replace("rho = 0.75", "rho = 1.5"), "rho"),
        (text.replace("h1 = 0.6", "h1 = 0.4"), "h1"),
        (text.replace("sigma1 = 1.0", "sigma1 = 0.0"), "sigma1"),
        (text.replace("horizon = 3.0", "horizon = 2.5"), "horizon"),
        (text.replace("horizon_t = 1.0\n", ""), "horizon_t"),
        (text.replace("points = 4001", "points = 1"), "points"),
        (format!("bogus = 1\n{text}"), "bogus"),
    ];
    for (i, (body, field)) in cases.iter().enumerate() {
        let cfg = dir.path().join(format!("bad{i}.toml"));
        fs::write(&cfg, body).unwrap();
        let out = dir.path().join(format!("out{i}"));
        let o = fraclead(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(1), "case {field}");
        assert!(stderr(&o).contains(field), "case {field}: {}", stderr(&o));
        assert!(files_in(&out).is_empty());
    }

    let sample = fs::read_to_string(config("sample.toml")).unwrap();
    let cfg = dir.path().join("sample.toml");
    fs::write(&cfg, sample.replacen("horizon = 2.0", "horizon = 1.5", 1)).unwrap();
    let o = fraclead(&[
        "sample",
        "--config",
        s(&cfg),
        "--path-in",
        "missing.csv",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("scheme1.horizon"), "{}", stderr(&o));

    let study = fs::read_to_string(config("quick.toml")).unwrap();
    let cfg = dir.path().join("study.toml");
    fs::write(&cfg, study.replace("theta = 0.02", "theta = 0.7")).unwrap();
    let out = dir.path().join("exp");
    let o = fraclead(&["experiment", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("theta"), "{}", stderr(&o));
    assert!(files_in(&out).is_empty());
}

#[test]
fn experiment_writes_three_reports() {
    let dir = TempDir::new().unwrap();
    let o = fraclead(&[
        "experiment",
        "--config",
        &config("quick.toml"),
        "--out",
        s(dir.path()),
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        files_in(dir.path()),
        ["estimates.csv", "manifest.json", "summary.csv"]
    );
    let estimates = fs::read_to_string(dir.path().join("estimates.csv")).unwrap();
    assert_eq!(
        estimates.lines().next(),
        Some("rho,n,replication,theta_hat")
    );
    assert_eq!(estimates.lines().count(), 9);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["base_seed"], 3);
}

#[test]
fn study_config_parses() {
    let dir = TempDir::new().unwrap();
    // zero jobs is rejected after the config is validated, before any work
    let o = fraclead(&[
        "experiment",
        "--config",
        &config("study.toml"),
        "--out",
        s(dir.path()),
        "--jobs",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("jobs"), "{}", stderr(&o));
}
