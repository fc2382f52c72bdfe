//! Command-line front door: loads a declarative run configuration,
//! dispatches to the library, and emits a machine-readable report.
//!
//! Exit codes: 0 = all checks hold, 1 = a mathematical check failed,
//! 2 = configuration or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use curvlab::cli::{self, RunConfig};

#[derive(Parser)]
#[command(name = "curvlab", version, about = "Curvature-operator laboratory runner")]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Report destination; stdout when omitted (JSON only).
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format: json or csv.
    #[arg(long)]
    format: Option<String>,

    /// Cap on worker threads.
    #[arg(long)]
    threads: Option<usize>,

    /// Seed override for sampled checks.
    #[arg(long)]
    seed: Option<u64>,

    /// Quadrature order override (nodes per axis).
    #[arg(long)]
    order: Option<usize>,
}

fn execute(args: &Args) -> Result<bool, curvlab::Error> {
    curvlab::verify_sign_convention()?;
    let mut config = RunConfig::load(&args.config)?;
    if let Some(out) = &args.output {
        config.options.output = Some(out.clone());
    }
    if let Some(fmt) = &args.format {
        config.options.format = fmt.parse()?;
    }
    if let Some(threads) = args.threads {
        config.options.threads = Some(threads);
    }
    if let Some(seed) = args.seed {
        config.options.seed = seed;
    }
    if let Some(order) = args.order {
        config.options.order = order;
    }
    let report = cli::run(&config)?;
    cli::write_report(&report, config.options.output.as_deref(), config.options.format)?;
    Ok(report.summary.verdict)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            cli::write_error_report(&err, args.output.as_deref());
            ExitCode::from(2)
        }
    }
}
