//! `cslfa` command line: reproducible minimal-shift, multigrid and Krylov
//! experiments driven by TOML configs.
//!
//! Exit codes: 0 on success, 1 when any sweep cell failed numerically,
//! 2 on configuration errors.

mod config;
mod output;
mod run;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use config::{load_config, ExperimentKind};
use output::{resolve_output_path, write_output, Provenance};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cslfa",
    version,
    about = "Minimal complex shift analysis and solver experiments for CSL-preconditioned Helmholtz problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Override a config key, e.g. --set n=128 or --set sigma.count=40.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output path; relative paths respect CSLFA_OUTPUT_DIR.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Sweep worker threads (default: all available).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal complex shift beta_min over a wavenumber range (k-grid analysis).
    BetaMin(RunArgs),
    /// Closed-form smoother-only shift bounds over a wavenumber range (1D).
    Smoother(RunArgs),
    /// Amplification factor G(theta) at fixed wavenumber and shift(s).
    AmpProfile(RunArgs),
    /// Krylov iteration counts over a (sigma, beta) grid.
    Heatmap(RunArgs),
    /// Iteration-minimizing shift per wavenumber and cycle count.
    IterMin(RunArgs),
    /// Half-plane-condition minimal shift over a wavenumber range.
    Hpc(RunArgs),
    /// Experimental and ellipse-estimate convergence factors over a shift grid (JSON).
    Convfactor(RunArgs),
    /// beta_min(sigma, N) vs beta_min(4 sigma, 2N) agreement.
    Invariance(RunArgs),
    /// Check a config file and report violations.
    Validate {
        /// Experiment config (TOML).
        config: PathBuf,
        /// Overrides applied before validation.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let (kind, args) = match cli.command {
        Command::BetaMin(a) => (ExperimentKind::BetaCurve, a),
        Command::Smoother(a) => (ExperimentKind::SmootherCurve, a),
        Command::AmpProfile(a) => (ExperimentKind::AmplificationProfile, a),
        Command::Heatmap(a) => (ExperimentKind::Heatmap, a),
        Command::IterMin(a) => (ExperimentKind::IterationMinimum, a),
        Command::Hpc(a) => (ExperimentKind::HpcCurve, a),
        Command::Convfactor(a) => (ExperimentKind::ConvfactorTable, a),
        Command::Invariance(a) => (ExperimentKind::InvarianceCheck, a),
        Command::Validate { config, overrides } => {
            let (parsed, _) = load_config(&config, &overrides)?;
            let violations = parsed.violations();
            if violations.is_empty() {
                println!("ok");
                return Ok(ExitCode::SUCCESS);
            }
            for v in &violations {
                println!("violation: {v}");
            }
            return Ok(ExitCode::from(2));
        }
    };

    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }

    let (config, canonical) = load_config(&args.config, &args.overrides)?;
    if config.kind != kind {
        anyhow::bail!(
            "config kind '{}' does not match subcommand '{}'",
            config.kind.subcommand(),
            kind.subcommand()
        );
    }
    let provenance = Provenance::new(kind.subcommand(), &config.comment, config.seed, &canonical);
    let result = run::execute(&config, &provenance)?;

    let extension = if result.is_json { "json" } else { "csv" };
    let default_name = format!("cslfa-{}.{extension}", kind.subcommand());
    let path = resolve_output_path(
        args.output.as_deref(),
        config.output.as_deref(),
        &default_name,
    );
    write_output(&path, &result.text)?;
    eprintln!("{} -> {}", result.summary, path.display());
    if result.failed_cells > 0 {
        eprintln!("{} cell(s) failed numerically", result.failed_cells);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
