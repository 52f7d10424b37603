//! Command-line frontend: band scans, dispersion surfaces, Dirac and
//! flat-band eigenvalue searches, `|S|` maps and the validation suite.
//!
//! Exit codes: 0 success, 2 input error (flags, potentials, paths), 3
//! numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use hexband::dispersion::{self, Quasimomentum};
use hexband::potential::Potential;
use hexband::spectrum;
use hexband::transfer::Params;
use hexband::Error;

mod output;
mod verify;

#[derive(Parser)]
#[command(
    name = "hexband",
    about = "Band structure of periodic Schrödinger operators on the hexagonal lattice \
             with semi-rigid, mass-loaded vertex conditions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Edge stiffness a > 0
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Semi-rigidity κ⁻¹ ≥ 0 (0 = rigid vertices)
    #[arg(long = "kappa-inv", default_value_t = 0.0)]
    kappa_inv: f64,
    /// Concentrated vertex mass m ≥ 0
    #[arg(long, default_value_t = 0.0)]
    mass: f64,
    /// Edge potential: zero | cosine:<amp> | file:<path>
    #[arg(long, default_value = "zero")]
    potential: String,
}

#[derive(Args, Clone)]
struct ScanArgs {
    /// Lower end of the λ window
    #[arg(long, default_value_t = spectrum::DEFAULT_SCAN_RANGE.0)]
    lmin: f64,
    /// Upper end of the λ window
    #[arg(long, default_value_t = spectrum::DEFAULT_SCAN_RANGE.1)]
    lmax: f64,
    /// Grid cells for the λ scan (θ nodes per axis for `smap`)
    #[arg(long, default_value_t = spectrum::DEFAULT_GRID_N)]
    grid: usize,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the discriminant and report bands, gaps, Σ₀ and Dirac values
    Bands {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Also write the (λ, T₁, T₂, Δ, inside_band) curve to this path
        #[arg(long = "delta-curve")]
        delta_curve: Option<PathBuf>,
    },
    /// Bloch dispersion surface over a θ grid
    Surface {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
        /// θ nodes per axis
        #[arg(long = "theta-grid", default_value_t = 25)]
        theta_grid: usize,
        /// Levels kept per θ node
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dirac λ-values with their quasimomenta
    Dirac {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Flat-band eigenvalues Σ₀ (roots of D₀)
    Eigenvalues {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// |S(θ₁,θ₂)| over the Brillouin zone
    Smap {
        /// θ nodes per axis
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the cross-validation suite and print a pass/fail table
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) | Error::Singular(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_potential(spec: &str) -> Result<Potential, Error> {
    if spec == "zero" {
        return Potential::make_builtin("zero", 0.0);
    }
    if let Some(amp) = spec.strip_prefix("cosine:") {
        let amp: f64 = amp
            .parse()
            .map_err(|_| Error::InvalidInput(format!("malformed cosine amplitude '{amp}'")))?;
        return Potential::make_builtin("cosine", amp);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return Potential::from_file(std::path::Path::new(path));
    }
    Err(Error::InvalidInput(format!(
        "unknown potential '{spec}' (expected zero, cosine:<amp> or file:<path>)"
    )))
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Bands { model, scan, out, delta_curve } => {
            let params = Params::new(model.a, model.kappa_inv, model.mass)?;
            let p = parse_potential(&model.potential)?;
            let report = spectrum::full_report(&p, &params, (scan.lmin, scan.lmax), scan.grid)?;
            if let Some(curve_path) = &delta_curve {
                let profile =
                    spectrum::delta_profile(&p, &params, (scan.lmin, scan.lmax), scan.grid)?;
                output::write_delta_curve(curve_path, &model, &scan, &profile)?;
            }
            output::write_bands(&out, &model, &scan, &report)?;
            summary(
                &out,
                format!(
                    "bands: {} bands, {} gaps, {} Σ₀ values, {} Dirac values on [{}, {}]",
                    report.bands.len(),
                    report.gaps.len(),
                    report.sigma0.len(),
                    report.dirac.len(),
                    scan.lmin,
                    scan.lmax
                ),
            );
            Ok(())
        }
        Command::Surface { model, scan, theta_grid, levels, out } => {
            if theta_grid < 3 {
                return Err(Error::Parameter(format!(
                    "theta grid needs at least 3 nodes per axis, got {theta_grid}"
                )));
            }
            let params = Params::new(model.a, model.kappa_inv, model.mass)?;
            let p = parse_potential(&model.potential)?;
            let pi = std::f64::consts::PI;
            let node = |i: usize| {
                (-pi + 2.0 * pi * i as f64 / (theta_grid - 1) as f64).clamp(-pi, pi)
            };
            // per-node solves are independent; collect preserves canonical order
            let nodes: Vec<(usize, usize)> = (0..theta_grid)
                .flat_map(|i| (0..theta_grid).map(move |j| (i, j)))
                .collect();
            let per_node: Vec<Vec<spectrum::SurfaceSample>> = nodes
                .par_iter()
                .map(|&(i, j)| {
                    let q = Quasimomentum::new(node(i), node(j))?;
                    spectrum::solve_bloch_levels(
                        &p,
                        &params,
                        &q,
                        (scan.lmin, scan.lmax),
                        scan.grid,
                        levels,
                    )
                })
                .collect::<Result<_, Error>>()?;
            let samples: Vec<spectrum::SurfaceSample> =
                per_node.into_iter().flatten().collect();
            output::write_surface(&out, &model, &scan, theta_grid, &samples)?;
            summary(
                &out,
                format!("surface: {} samples on a {theta_grid}×{theta_grid} θ grid", samples.len()),
            );
            Ok(())
        }
        Command::Dirac { model, scan, out } => {
            let params = Params::new(model.a, model.kappa_inv, model.mass)?;
            let p = parse_potential(&model.potential)?;
            let roots = spectrum::dirac_roots(&p, &params, (scan.lmin, scan.lmax), scan.grid)?;
            output::write_dirac(&out, &model, &scan, &roots)?;
            summary(&out, format!("dirac: {} λ-values on [{}, {}]", roots.len(), scan.lmin, scan.lmax));
            Ok(())
        }
        Command::Eigenvalues { model, scan, out } => {
            let params = Params::new(model.a, model.kappa_inv, model.mass)?;
            let p = parse_potential(&model.potential)?;
            let roots = spectrum::sigma0_roots(&p, &params, (scan.lmin, scan.lmax), scan.grid)?;
            // report |D₀| residuals alongside
            let residual = |lam: f64| -> Result<f64, Error> {
                let m = if p.is_zero() {
                    hexband::transfer::monodromy_free(lam, params.a)?
                } else {
                    hexband::transfer::monodromy_numeric(
                        &p,
                        lam,
                        params.a,
                        hexband::transfer::DEFAULT_STEPS,
                    )?
                };
                Ok(dispersion::d_values(&m, &params).d0.abs())
            };
            let rows: Vec<(f64, f64)> = roots
                .iter()
                .map(|&r| residual(r).map(|d0| (r, d0)))
                .collect::<Result<_, Error>>()?;
            output::write_eigenvalues(&out, &model, &scan, &rows)?;
            summary(&out, format!("eigenvalues: {} Σ₀ values on [{}, {}]", rows.len(), scan.lmin, scan.lmax));
            Ok(())
        }
        Command::Smap { grid, out } => {
            if grid < 3 {
                return Err(Error::Parameter(format!(
                    "smap grid needs at least 3 nodes per axis, got {grid}"
                )));
            }
            output::write_smap(&out, grid)?;
            summary(&out, format!("smap: {grid}×{grid} grid of |S|"));
            Ok(())
        }
        Command::Verify => {
            if verify::run_suite() {
                Ok(())
            } else {
                Err(Error::Numerical("verification suite reported failures".into()))
            }
        }
    }
}

/// One-line summary; kept off stdout when the data itself goes there.
fn summary(out: &OutArgs, line: String) {
    if out.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}
