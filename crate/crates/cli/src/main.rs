//! `lpforms`: plot-ready data and machine-readable verification reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Context;
use crate::config::{read_config, List, Settings};
use crate::output::{emit, Format};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(#[from] UsageError),
    #[error("computation failed: {0}")]
    Runtime(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "lpforms", version, about = "L^p spectra of the Hodge Laplacian on hyperbolic space: experiments and checks")]
struct Cli {
    /// Output directory; without it the main table (csv) or the report (json) goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks, echoed in every report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// key=value file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record wall-clock runtimes (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary samples, metadata and an optional membership raster of a spectral region.
    Regions(RegionsArgs),
    /// Residual quotients of the approximate eigenforms along a boundary point.
    Weyl(WeylArgs),
    /// Radial eigen-ODE profile and its fitted growth rate.
    Ode(OdeArgs),
    /// Tail exponents and L^p threshold of the harmonic middle-degree family.
    Middle(MiddleArgs),
    /// Heat, resolvent, wave, volume and one-variable lemma checks.
    Kernels(KernelsArgs),
    /// Runs the acceptance suite.
    CheckAll(CheckAllArgs),
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Exponent in [1, inf]; "inf" is accepted.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Also emit a membership raster.
    #[arg(long)]
    pub raster: bool,
    #[arg(long)]
    pub raster_size: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Comma-separated, ascending.
    #[arg(long)]
    pub n_list: Option<List<u32>>,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Sphere eigenvalue.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "Lre", allow_hyphen_values = true)]
    pub lre: Option<f64>,
    #[arg(long = "Lim", allow_hyphen_values = true)]
    pub lim: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MiddleArgs {
    /// Odd dimension parameter.
    #[arg(long = "N")]
    pub n: Option<u32>,
    /// Sphere eigenvalue; defaults to the lowest co-closed one.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub p_list: Option<List<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelCheck {
    All,
    Heat,
    Wave,
    Volume,
    Appendix,
}

impl std::fmt::Display for KernelCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

impl std::str::FromStr for KernelCheck {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Args)]
pub struct KernelsArgs {
    #[arg(long, value_enum)]
    pub check: Option<KernelCheck>,
}

#[derive(Debug, Args)]
pub struct CheckAllArgs {
    /// Comma-separated criterion ids (default: all).
    #[arg(long)]
    pub only: Option<List<u32>>,
    /// Scales the radial integrability threshold, to confirm the suite catches the fault.
    #[arg(long, hide = true)]
    pub perturb_integrability: Option<f64>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = match &cli.config {
        Some(path) => read_config(path)?,
        None => Default::default(),
    };
    let mut settings = Settings::new(file);
    let format = settings.get("format", cli.format, Format::Csv)?;
    let out = settings.get_opt::<String>("out", cli.out.map(|p| p.display().to_string()))?.map(PathBuf::from);
    let seed = settings.get("seed", cli.seed, lpforms::acceptance::SuiteOptions::default().seed)?;
    let timings = settings.flag("timings", cli.timings)?;
    // the output location does not change results, so keep it out of the header
    settings.effective.remove("out");
    let ctx = Context { settings, seed, timings };
    let mut report = match cli.command {
        Command::Regions(a) => commands::regions(ctx, a)?,
        Command::Weyl(a) => commands::weyl(ctx, a)?,
        Command::Ode(a) => commands::ode(ctx, a)?,
        Command::Middle(a) => commands::middle(ctx, a)?,
        Command::Kernels(a) => commands::kernels(ctx, a)?,
        Command::CheckAll(a) => commands::check_all(ctx, a)?,
    };
    emit(&mut report, format, out.as_deref())?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAILED {}: {:?} vs {:?}", c.name, c.measured, c.expected);
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
