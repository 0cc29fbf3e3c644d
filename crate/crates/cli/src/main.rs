//! `pcyclic`: run orbit, proximity, certificate, classification and sweep
//! experiments from a TOML config.
//!
//! Exit codes: 0 verdict achieved, 2 verdict not achieved, 3 config error,
//! 4 runtime error. Log verbosity comes from `PCYCLIC_LOG` (e.g. `info`).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pcyclic::harness::{load_config_with, run_experiment, write_outputs, Mode, Overrides, TraceFormat};

const LOG_ENV: &str = "PCYCLIC_LOG";

#[derive(Parser)]
#[command(name = "pcyclic", version, about = "Experiments on cyclic and pseudocontractive mappings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Picard iteration to a fixed point from each start.
    Orbit(Common),
    /// Best proximity run of a cyclic map from each start.
    Proximity(Common),
    /// Certificate quantities over sampled pairs.
    Certify(Common),
    /// Intermediate-sense classification over sampled pairs.
    Classify(Common),
    /// Classification across a parameter sweep.
    Sweep(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    config: PathBuf,
    /// Directory for report.toml and trace files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

enum Failure {
    Config(String),
    Runtime(anyhow::Error),
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (mode, args) = match cli.command {
        Command::Orbit(a) => (Mode::Orbit, a),
        Command::Proximity(a) => (Mode::Proximity, a),
        Command::Certify(a) => (Mode::Certify, a),
        Command::Classify(a) => (Mode::Classify, a),
        Command::Sweep(a) => (Mode::Sweep, a),
    };
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let overrides = Overrides { mode: Some(mode), seed: args.seed, max_iter: args.max_iter, tol: args.tol };
    let cfg = load_config_with(&text, &overrides).map_err(|e| Failure::Config(e.to_string()))?;
    let report = run_experiment(&cfg).map_err(|e| Failure::Runtime(e.into()))?;
    if let Some(dir) = &args.out {
        let format = match args.format {
            FormatArg::Csv => TraceFormat::Csv,
            FormatArg::Json => TraceFormat::Json,
        };
        let written = write_outputs(&report, dir, format)
            .with_context(|| format!("writing outputs to {}", dir.display()))
            .map_err(Failure::Runtime)?;
        for path in written {
            log::info!("wrote {}", path.display());
        }
    }
    print!("{}", report.summary_toml());
    Ok(report.achieved)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}
