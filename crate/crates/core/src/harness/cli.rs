//! Argument parsing and subcommand dispatch for the `squeeze-lab` binary.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use super::config::{Overrides, RunConfig, OUT_ENV};
use super::output::{emit_csv, emit_svg_plot};
use super::pipeline::{run_verify_paper, slice_plot, CheckVerdict};
use crate::domain::{d_minkowski, DegreeVector, DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::metrics::c_g2;
use crate::squeeze::{build_k, psh_violation_report, sq_lower_origin, sq_upper_closed_form, sq_upper_numeric};

#[derive(Debug, Parser)]
#[command(name = "squeeze-lab", version, about = "Squeezing-function counterexample toolkit")]
#[command(args_conflicts_with_subcommands = false)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Polydisc radius defining the compact set, in (0, 1/2).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Radius of the excised ball around Q, in (0, r).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Gauge bisection and membership tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Number of grid points on the unit circle for extremal-function maxima.
    #[arg(long = "tau-grid", global = true)]
    pub tau_grid: Option<usize>,
    /// Angular samples per face of the compact set.
    #[arg(long = "k-density", global = true)]
    pub k_density: Option<usize>,
    /// Radii sampled inside the slice annulus.
    #[arg(long = "slice-points", global = true)]
    pub slice_points: Option<usize>,
    /// Output directory (falls back to $SQUEEZE_LAB_OUT).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `key = value` file; flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Replaces the crossing radius in the verdict (negative control).
    #[arg(long = "beta-override", global = true, hide = true, allow_negative_numbers = true)]
    pub beta_override: Option<f64>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            r: self.r,
            eps: self.eps,
            tol: self.tol,
            tau_grid: self.tau_grid,
            k_density: self.k_density,
            slice_points: self.slice_points,
            out: self.out.clone(),
            seed: self.seed,
            beta_override: self.beta_override,
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let env_out = std::env::var_os(OUT_ENV).map(PathBuf::from);
        RunConfig::resolve(self.config.as_deref(), &self.overrides(), env_out)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DomainArg {
    /// The symmetrized bidisc.
    G2,
    /// Its convex hull.
    Hull,
    /// The polydisc of radius `--radius`.
    Polydisc,
    /// The ball of radius `--radius` about the origin.
    Ball,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// First coordinate as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z1: Complex64,
    /// Second coordinate as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub z2: Complex64,
}

impl PointArgs {
    fn point(&self) -> Point2C {
        Point2C::new(self.z1, self.z2)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a point against a domain.
    Membership {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, default_value_t = 0.4)]
        radius: f64,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Weighted Minkowski gauge of a point.
    Minkowski {
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, default_value_t = 0.4)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        d1: u32,
        #[arg(long, default_value_t = 2)]
        d2: u32,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Carathéodory distance between two points of the symmetrized bidisc.
    Cdist {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w1: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        w2: Complex64,
    },
    /// Squeezing-function bounds at a point of the counterexample domain.
    Bounds {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Run every check and write the report bundle.
    VerifyPaper,
    /// Write the slice table and figure only.
    Plot,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

fn domain_spec(kind: DomainArg, radius: f64) -> Result<DomainSpec> {
    match kind {
        DomainArg::G2 => Ok(DomainSpec::symmetrized_bidisc()),
        DomainArg::Hull => Ok(DomainSpec::conv_hull_g2()),
        DomainArg::Polydisc => DomainSpec::polydisc(radius),
        DomainArg::Ball => DomainSpec::ball(Point2C::ORIGIN, radius),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Runs a parsed command. `Ok(true)` means success, `Ok(false)` a failed
/// verification.
pub fn run(cli: &Cli) -> Result<bool> {
    let cfg = cli.global.resolve()?;
    match &cli.command {
        Command::Membership { domain, radius, point } => {
            let z = point.point();
            let verdict = domain_spec(*domain, *radius)?.with_tol(cfg.tol).membership(&z)?;
            print_json(&json!({ "point": z, "verdict": verdict }))?;
            Ok(true)
        }
        Command::Minkowski { domain, radius, d1, d2, point } => {
            let z = point.point();
            let spec = domain_spec(*domain, *radius)?;
            let d = DegreeVector::new(*d1, *d2)?;
            let gauge = d_minkowski(&z, &spec, d, cfg.tol)?;
            print_json(&json!({ "point": z, "gauge": gauge, "closed_form": spec.gauge_oracle(&z, d) }))?;
            Ok(true)
        }
        Command::Cdist { point, w1, w2 } => {
            let value = c_g2(&point.point(), &Point2C::new(*w1, *w2), cfg.circle_grid())?;
            print_json(&serde_json::to_value(value)?)?;
            Ok(true)
        }
        Command::Bounds { point } => {
            let z = point.point();
            let cx = cfg.counterexample()?;
            let k = build_k(&cx)?;
            let closed = if z.z2 == Complex64::new(0.0, 0.0) {
                Some(sq_upper_closed_form(z.z1, &cx)?)
            } else {
                None
            };
            let numeric = sq_upper_numeric(&z, &k, cx.tau_grid, &cx)?;
            let origin = sq_lower_origin(&cx, cx.certification_points)?;
            print_json(&json!({
                "point": z,
                "beta": cx.beta(),
                "upper_closed_form": closed,
                "upper_numeric": numeric,
                "origin_lower": origin,
            }))?;
            Ok(true)
        }
        Command::VerifyPaper => {
            let bundle = run_verify_paper(&cfg)?;
            bundle.write(&cfg.out)?;
            for check in &bundle.checks {
                let tag = match check.verdict {
                    CheckVerdict::Pass => "pass",
                    CheckVerdict::Fail => "FAIL",
                    CheckVerdict::Indeterminate => "indeterminate",
                };
                println!("{tag:>13}  {}", check.name);
            }
            for (name, t) in &bundle.timings {
                eprintln!("timing {name}: {:.3}s", t.as_secs_f64());
            }
            let v = &bundle.violation;
            println!(
                "verdict: {:?} (origin lower {}, annulus sup {:.12}, beta {:.12})",
                v.verdict, v.center_lower, v.sup_annulus_upper, v.beta
            );
            println!("reports written to {}", cfg.out.display());
            Ok(bundle.passed())
        }
        Command::Plot => {
            let report = psh_violation_report(&cfg.counterexample()?)?;
            std::fs::create_dir_all(&cfg.out)?;
            let bundle_table = super::pipeline::slice_table(&cfg, &report);
            emit_csv(&bundle_table, &cfg.out.join("slice_bounds.csv"))?;
            emit_svg_plot(&slice_plot(&report), &cfg.out.join("slice.svg"))?;
            println!("slice figure written to {}", cfg.out.join("slice.svg").display());
            Ok(true)
        }
    }
}

/// Entry point shared by the binary: 0 success, 1 failed verification, 2 error.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Usage { .. }) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
