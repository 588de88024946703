//! CSV and JSON formats.
//!
//! Every float is written in scientific notation with 17 significant
//! digits, which round-trips an `f64` exactly.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::ContrastCurve;
use crate::experiment::ExperimentReport;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write equal-length float columns under a header row.
pub fn write_table<W: Write>(w: W, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    let rows = columns.first().map_or(0, |c| c.len());
    if headers.len() != columns.len() || columns.iter().any(|c| c.len() != rows) {
        return Err(Error::structure(
            "table",
            "columns must match headers and share a length",
        ));
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(headers)?;
    for r in 0..rows {
        out.write_record(columns.iter().map(|c| fmt_f64(c[r])))?;
    }
    out.flush()?;
    Ok(())
}

/// Read a float table, checking the header row against `expected`.
pub fn read_table<R: Read>(r: R, expected: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut input = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = input.headers()?.clone();
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header {:?}, found {:?}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut columns = vec![Vec::new(); expected.len()];
    for (line, record) in input.records().enumerate() {
        let record = record?;
        for (k, field) in record.iter().enumerate() {
            let x: f64 = field.parse().map_err(|_| {
                Error::Parse(format!(
                    "row {}: cannot parse {field:?} as a number",
                    line + 1
                ))
            })?;
            columns[k].push(x);
        }
    }
    Ok(columns)
}

/// `time,value` observations of one component.
pub fn write_observations<W: Write>(w: W, times: &[f64], values: &[f64]) -> Result<()> {
    write_table(w, &["time", "value"], &[times, values])
}

pub fn read_observations<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut cols = read_table(r, &["time", "value"])?;
    let values = cols.pop().unwrap_or_default();
    let times = cols.pop().unwrap_or_default();
    Ok((times, values))
}

/// Single-column `time` list.
pub fn write_times<W: Write>(w: W, times: &[f64]) -> Result<()> {
    write_table(w, &["time"], &[times])
}

pub fn read_times<R: Read>(r: R) -> Result<Vec<f64>> {
    Ok(read_table(r, &["time"])?.pop().unwrap_or_default())
}

/// `time,x1,x2` latent path of both components on a shared grid.
pub fn write_path<W: Write>(w: W, times: &[f64], x1: &[f64], x2: &[f64]) -> Result<()> {
    write_table(w, &["time", "x1", "x2"], &[times, x1, x2])
}

pub fn read_path<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut cols = read_table(r, &["time", "x1", "x2"])?;
    let x2 = cols.pop().unwrap_or_default();
    let x1 = cols.pop().unwrap_or_default();
    let t = cols.pop().unwrap_or_default();
    Ok((t, x1, x2))
}

/// `theta_tilde,value`, one row per grid point.
pub fn write_curve<W: Write>(w: W, curve: &ContrastCurve) -> Result<()> {
    write_table(
        w,
        &["theta_tilde", "value"],
        &[&curve.grid_points, &curve.values],
    )
}

pub fn read_curve<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut cols = read_table(r, &["theta_tilde", "value"])?;
    let values = cols.pop().unwrap_or_default();
    let points = cols.pop().unwrap_or_default();
    Ok((points, values))
}

/// Long-form `rho,n,replication,theta_hat`.
pub fn write_estimates<W: Write>(w: W, report: &ExperimentReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rho", "n", "replication", "theta_hat"])?;
    for cell in &report.cells {
        for (r, e) in cell.estimates.iter().enumerate() {
            out.write_record([
                fmt_f64(cell.rho),
                cell.n.to_string(),
                r.to_string(),
                fmt_f64(*e),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row of summary statistics per `(rho, n)` cell.
pub fn write_summary<W: Write>(w: W, report: &ExperimentReport) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "rho",
        "n",
        "count",
        "mean",
        "median",
        "stdev",
        "within_1_step",
        "within_2_steps",
    ])?;
    for cell in &report.cells {
        let s = &cell.summary;
        out.write_record([
            fmt_f64(cell.rho),
            cell.n.to_string(),
            s.count.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.median),
            fmt_f64(s.stdev),
            fmt_f64(s.within_1_step),
            fmt_f64(s.within_2_steps),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    crate_version: &'a str,
    config: &'a crate::experiment::ExperimentConfig,
    cells: Vec<ManifestCell<'a>>,
    wall_time_secs: f64,
}

#[derive(Serialize)]
struct ManifestCell<'a> {
    rho: f64,
    n: u32,
    seeds: &'a [u64],
}

/// JSON manifest with the full configuration and every replication seed.
pub fn write_manifest<W: Write>(w: W, report: &ExperimentReport) -> Result<()> {
    let manifest = Manifest {
        crate_version: env!("CARGO_PKG_VERSION"),
        config: &report.config,
        cells: report
            .cells
            .iter()
            .map(|c| ManifestCell {
                rho: c.rho,
                n: c.n,
                seeds: &c.seeds,
            })
            .collect(),
        wall_time_secs: report.wall_time_secs,
    };
    write_json(w, &manifest)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}
