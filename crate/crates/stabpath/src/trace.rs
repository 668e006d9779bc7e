//! Tabular artifacts: path traces and fundamental-solution traces, as CSV or JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use stabpath_core::curves::HgPath;
use stabpath_core::linalg::CMatrix;
use stabpath_core::ode::Gauged;
use stabpath_core::stab_p1::PathP1;

use crate::failure::{read_error, write_error, CmdResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Writes `rows` to `dir/stem.{csv,json}` and returns the path.
pub fn write_rows<R: Serialize>(dir: &Path, stem: &str, format: Format, rows: &[R]) -> CmdResult<PathBuf> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(&path).map_err(|e| write_error(&path, e))?;
            for r in rows {
                w.serialize(r).map_err(|e| write_error(&path, e))?;
            }
            w.flush().map_err(|e| write_error(&path, e))?;
        }
        Format::Json => write_json(&path, &rows)?,
    }
    Ok(path)
}

/// Pretty JSON with a trailing newline. Field order follows the struct definitions.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CmdResult<()> {
    let f = File::create(path).map_err(|e| write_error(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| write_error(path, e))?;
    w.write_all(b"\n").map_err(|e| write_error(path, e))?;
    w.flush().map_err(|e| write_error(path, e))
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Row {
    pub t: f64,
    pub re_tau: f64,
    pub im_tau: f64,
    pub k: i64,
    pub re_phi: f64,
    pub im_phi: f64,
    pub re_z_point: f64,
    pub im_z_point: f64,
    pub re_z_line: f64,
    pub im_z_line: f64,
    pub in_eventual_regime: bool,
}

pub fn p1_rows(path: &PathP1) -> Vec<P1Row> {
    path.samples
        .iter()
        .map(|s| {
            let p = &s.point;
            P1Row {
                t: s.t,
                re_tau: p.tau.re,
                im_tau: p.tau.im,
                k: p.chart_k,
                re_phi: p.phi_k.re,
                im_phi: p.phi_k.im,
                re_z_point: p.z_point.re,
                im_z_point: p.z_point.im,
                re_z_line: p.z_line.re,
                im_z_line: p.z_line.im,
                in_eventual_regime: p.in_eventual_regime(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveRow {
    pub s: f64,
    pub re_tau: f64,
    pub im_tau: f64,
    pub lifts_so_far: bool,
}

pub fn curve_rows(path: &HgPath) -> Vec<CurveRow> {
    path.samples
        .iter()
        .zip(path.lifts_so_far())
        .map(|(&(s, tau), ok)| CurveRow {
            s,
            re_tau: tau.re,
            im_tau: tau.im,
            lifts_so_far: ok,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueRow {
    pub s: f64,
    pub residual: f64,
}

/// One sample of a fundamental solution: `Phi_t = e^{log_gauge} M` with `M`
/// stored row-major as `re_p{i}_{j}`, `im_p{i}_{j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QdeSample {
    pub t: f64,
    pub entries: Vec<Complex64>,
    pub log_gauge: f64,
}

fn qde_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 0..n {
        for j in 0..n {
            h.push(format!("re_p{i}_{j}"));
            h.push(format!("im_p{i}_{j}"));
        }
    }
    h.push("log_gauge".into());
    h
}

pub fn qde_samples(t: &[f64], samples: &[Gauged]) -> Vec<QdeSample> {
    t.iter()
        .zip(samples)
        .map(|(&t, g)| QdeSample {
            t,
            entries: g.phi.as_slice().to_vec(),
            log_gauge: g.log_scale,
        })
        .collect()
}

#[derive(Serialize)]
struct QdeJsonRow {
    t: f64,
    /// Row-major `[re, im]` pairs.
    phi: Vec<[f64; 2]>,
    log_gauge: f64,
}

pub fn write_qde_trace(dir: &Path, stem: &str, format: Format, n: usize, rows: &[QdeSample]) -> CmdResult<PathBuf> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(&path).map_err(|e| write_error(&path, e))?;
            w.write_record(qde_header(n)).map_err(|e| write_error(&path, e))?;
            for r in rows {
                // Debug formatting round-trips and switches to exponents at the extremes
                let mut rec = vec![format!("{:?}", r.t)];
                for z in &r.entries {
                    rec.push(format!("{:?}", z.re));
                    rec.push(format!("{:?}", z.im));
                }
                rec.push(format!("{:?}", r.log_gauge));
                w.write_record(&rec).map_err(|e| write_error(&path, e))?;
            }
            w.flush().map_err(|e| write_error(&path, e))?;
        }
        Format::Json => {
            let out: Vec<QdeJsonRow> = rows
                .iter()
                .map(|r| QdeJsonRow {
                    t: r.t,
                    phi: r.entries.iter().map(|z| [z.re, z.im]).collect(),
                    log_gauge: r.log_gauge,
                })
                .collect();
            write_json(&path, &out)?;
        }
    }
    Ok(path)
}

/// Reads a CSV trace written by [`write_qde_trace`]; returns the grid and gauged samples.
pub fn read_qde_trace(path: &Path) -> CmdResult<(Vec<f64>, Vec<Gauged>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| read_error(path, e))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| read_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let cols = header.len();
    // t + 2 n^2 + log_gauge
    let n = (((cols.saturating_sub(2)) / 2) as f64).sqrt().round() as usize;
    if n == 0 || header != qde_header(n) {
        return Err(read_error(
            path,
            "header does not match t, re_p0_0, im_p0_0, ..., log_gauge",
        ));
    }
    let mut t = Vec::new();
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| read_error(path, e))?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| read_error(path, format!("row {}: {e}", line + 2)))?;
        if vals.len() != cols || vals.iter().any(|v| !v.is_finite()) {
            return Err(read_error(
                path,
                format!("row {}: expected {cols} finite numbers", line + 2),
            ));
        }
        let m = CMatrix::from_fn(n, |i, j| {
            let k = 1 + 2 * (i * n + j);
            Complex64::new(vals[k], vals[k + 1])
        });
        t.push(vals[0]);
        samples.push(Gauged {
            phi: m,
            log_scale: vals[cols - 1],
        });
    }
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::input(format!(
            "{}: t must be strictly increasing",
            path.display()
        )));
    }
    Ok((t, samples))
}
