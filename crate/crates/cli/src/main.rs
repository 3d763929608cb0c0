use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qir_cli::commands;
use qir_cli::config::RunConfig;
use qir_cli::CliError;

/// Monte Carlo ranging with entangled light and homodyne correlation.
#[derive(Parser)]
#[command(name = "qir", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Override `experiment.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Override `experiment.n_trials`.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run trials and write the trial table, correlation series and manifest.
    Simulate(RunArgs),
    /// Estimate detection probability over an eta by intensity grid.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated reflectivities.
        #[arg(long, value_delimiter = ',', required = true)]
        etas: Vec<f64>,
        /// Comma-separated reference intensities.
        #[arg(long, value_delimiter = ',', required = true)]
        intensities: Vec<f64>,
    },
    /// Compare the squeezed-source and classical pipelines.
    Compare {
        /// Squeezed-source configuration.
        #[command(flatten)]
        run: RunArgs,
        /// Classical-source configuration.
        #[arg(long)]
        classical_config: PathBuf,
    },
    /// Render a correlation-series or sweep CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: Option<&PathBuf>, args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(n) = args.trials {
        cfg.n_trials = n;
    }
    cfg.to_trial_config()?;
    Ok(cfg)
}

fn threads() -> Result<usize, CliError> {
    match std::env::var("QIR_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("QIR_THREADS must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = threads()?;
    match cli.command {
        Command::Simulate(args) => {
            let cfg = load(args.config.as_ref(), &args)?;
            commands::with_threads(threads, || commands::simulate(&cfg, &args.out))??;
        }
        Command::Sweep { run, etas, intensities } => {
            let cfg = load(run.config.as_ref(), &run)?;
            commands::with_threads(threads, || commands::sweep(&cfg, &etas, &intensities, &run.out))??;
        }
        Command::Compare { run, classical_config } => {
            let q = load(run.config.as_ref(), &run)?;
            let c = load(Some(&classical_config), &run)?;
            commands::with_threads(threads, || commands::compare(&q, &c, &run.out))??;
        }
        Command::Plot { csv, out } => commands::plot(&csv, &out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qir: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
