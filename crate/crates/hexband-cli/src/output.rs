//! Deterministic CSV and JSON emitters.
//!
//! CSV files carry `#`-prefixed metadata lines (model parameters, window)
//! above a single header line. Floats print in Rust's shortest round-trip
//! representation, so re-parsing an emitted file reproduces the values
//! bit-exactly and repeated runs produce byte-identical artifacts.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use hexband::dispersion::{DeltaEval, Quasimomentum};
use hexband::spectrum::{SpectrumReport, SurfaceSample};
use hexband::Error;

use crate::{ModelArgs, OutArgs, ScanArgs};

fn open(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Shortest representation that parses back to the same f64.
fn fmt(v: f64) -> String {
    format!("{v}")
}

fn model_metadata(model: &ModelArgs) -> Vec<(&'static str, String)> {
    vec![
        ("a", fmt(model.a)),
        ("kappa_inv", fmt(model.kappa_inv)),
        ("mass", fmt(model.mass)),
        ("potential", model.potential.clone()),
    ]
}

fn scan_metadata(scan: &ScanArgs) -> Vec<(&'static str, String)> {
    vec![
        ("lmin", fmt(scan.lmin)),
        ("lmax", fmt(scan.lmax)),
        ("grid", scan.grid.to_string()),
    ]
}

fn write_meta(w: &mut dyn Write, command: &str, pairs: &[(&'static str, String)]) -> io::Result<()> {
    writeln!(w, "# command {command}")?;
    for (k, v) in pairs {
        writeln!(w, "# {k} {v}")?;
    }
    Ok(())
}

pub fn write_bands(
    out: &OutArgs,
    model: &ModelArgs,
    scan: &ScanArgs,
    report: &SpectrumReport,
) -> Result<(), Error> {
    let mut w = open(out.out.as_ref())?;
    if out.format == "json" {
        serde_json::to_writer_pretty(&mut w, report)
            .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
        writeln!(w)?;
        return Ok(());
    }
    let mut meta = model_metadata(model);
    meta.extend(scan_metadata(scan));
    write_meta(&mut w, "bands", &meta)?;
    writeln!(w, "kind,lo,hi,width")?;
    for b in &report.bands {
        writeln!(w, "band,{},{},{}", fmt(b.lo), fmt(b.hi), fmt(b.hi - b.lo))?;
    }
    for g in &report.gaps {
        writeln!(w, "gap,{},{},{}", fmt(g.lo), fmt(g.hi), fmt(g.width))?;
    }
    for &s in &report.sigma0 {
        writeln!(w, "sigma0,{},{},0", fmt(s), fmt(s))?;
    }
    for &d in &report.dirac {
        writeln!(w, "dirac,{},{},0", fmt(d), fmt(d))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_delta_curve(
    path: &Path,
    model: &ModelArgs,
    scan: &ScanArgs,
    profile: &[DeltaEval],
) -> Result<(), Error> {
    let mut w: Box<dyn Write> = Box::new(BufWriter::new(File::create(path)?));
    let mut meta = model_metadata(model);
    meta.extend(scan_metadata(scan));
    write_meta(&mut w, "delta-curve", &meta)?;
    writeln!(w, "lambda,t1,t2,delta,inside_band")?;
    for d in profile {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt(d.lambda),
            fmt(d.t1),
            fmt(d.t2),
            fmt(d.delta),
            d.delta.abs() <= 1.0
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_surface(
    out: &OutArgs,
    model: &ModelArgs,
    scan: &ScanArgs,
    theta_grid: usize,
    samples: &[SurfaceSample],
) -> Result<(), Error> {
    let mut w = open(out.out.as_ref())?;
    if out.format == "json" {
        serde_json::to_writer_pretty(&mut w, samples)
            .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
        writeln!(w)?;
        return Ok(());
    }
    let mut meta = model_metadata(model);
    meta.extend(scan_metadata(scan));
    meta.push(("theta_grid", theta_grid.to_string()));
    write_meta(&mut w, "surface", &meta)?;
    writeln!(w, "theta1,theta2,branch_sign,lambda,level_index,flat")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt(s.theta1),
            fmt(s.theta2),
            s.branch_sign,
            fmt(s.lambda),
            s.level_index,
            s.flat
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_dirac(
    out: &OutArgs,
    model: &ModelArgs,
    scan: &ScanArgs,
    roots: &[f64],
) -> Result<(), Error> {
    let momenta = Quasimomentum::dirac_pair();
    let mut w = open(out.out.as_ref())?;
    if out.format == "json" {
        let rows: Vec<serde_json::Value> = roots
            .iter()
            .flat_map(|&lam| {
                momenta.iter().map(move |q| {
                    serde_json::json!({"lambda": lam, "theta1": q.theta1, "theta2": q.theta2})
                })
            })
            .collect();
        serde_json::to_writer_pretty(&mut w, &rows)
            .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
        writeln!(w)?;
        return Ok(());
    }
    let mut meta = model_metadata(model);
    meta.extend(scan_metadata(scan));
    write_meta(&mut w, "dirac", &meta)?;
    writeln!(w, "lambda,theta1,theta2")?;
    for &lam in roots {
        for q in &momenta {
            writeln!(w, "{},{},{}", fmt(lam), fmt(q.theta1), fmt(q.theta2))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_eigenvalues(
    out: &OutArgs,
    model: &ModelArgs,
    scan: &ScanArgs,
    rows: &[(f64, f64)],
) -> Result<(), Error> {
    let mut w = open(out.out.as_ref())?;
    if out.format == "json" {
        let vals: Vec<f64> = rows.iter().map(|r| r.0).collect();
        serde_json::to_writer_pretty(&mut w, &vals)
            .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
        writeln!(w)?;
        return Ok(());
    }
    let mut meta = model_metadata(model);
    meta.extend(scan_metadata(scan));
    write_meta(&mut w, "eigenvalues", &meta)?;
    writeln!(w, "lambda,abs_d0")?;
    for (lam, d0) in rows {
        writeln!(w, "{},{}", fmt(*lam), fmt(*d0))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_smap(out: &OutArgs, grid: usize) -> Result<(), Error> {
    let pi = std::f64::consts::PI;
    let node = |i: usize| (-pi + 2.0 * pi * i as f64 / (grid - 1) as f64).clamp(-pi, pi);
    let mut w = open(out.out.as_ref())?;
    if out.format == "json" {
        let mut rows = Vec::with_capacity(grid * grid);
        for i in 0..grid {
            for j in 0..grid {
                let q = Quasimomentum::new(node(i), node(j))?;
                rows.push(serde_json::json!({
                    "theta1": q.theta1,
                    "theta2": q.theta2,
                    "s_abs": hexband::dispersion::s_magnitude(&q),
                }));
            }
        }
        serde_json::to_writer_pretty(&mut w, &rows)
            .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
        writeln!(w)?;
        return Ok(());
    }
    write_meta(&mut w, "smap", &[("grid", grid.to_string())])?;
    writeln!(w, "theta1,theta2,s_abs")?;
    for i in 0..grid {
        for j in 0..grid {
            let q = Quasimomentum::new(node(i), node(j))?;
            writeln!(
                w,
                "{},{},{}",
                fmt(q.theta1),
                fmt(q.theta2),
                fmt(hexband::dispersion::s_magnitude(&q))
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
