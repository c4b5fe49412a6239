use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entrospace_cli::{exit_code, render_human, render_json, run_str, CliError, Command, Options};

/// Axiom checks, entropy estimation, expansivity certificates and law
/// suites for entropy spaces described by JSON fixtures.
#[derive(Parser)]
#[command(name = "entrospace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the axiom and classification suites.
    Check(CommonArgs),
    /// Estimate entropies (relative, family-level and two-sided).
    Entropy(CommonArgs),
    /// Search for generator certificates.
    Expansivity(CommonArgs),
    /// Verify the structural laws the system is subject to.
    Laws(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Fixture file (JSON).
    file: String,
    /// Trajectory horizon.
    #[arg(long)]
    horizon: Option<u32>,
    /// Step budget for iterative searches (env: ENTROSPACE_BUDGET).
    #[arg(long)]
    budget: Option<u64>,
    /// Absolute tolerance for finite norm comparisons
    /// (env: ENTROSPACE_TOLERANCE).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Rotation seed for sampled classification on infinite backends.
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the machine-readable report.
    #[arg(long)]
    json: bool,
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn env_f64(name: &str) -> Option<f64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Check(a) => (Command::Check, a),
        Sub::Entropy(a) => (Command::Entropy, a),
        Sub::Expansivity(a) => (Command::Expansivity, a),
        Sub::Laws(a) => (Command::Laws, a),
    };
    let opts = Options {
        horizon: args.horizon,
        budget: args.budget.or_else(|| env_u64("ENTROSPACE_BUDGET")),
        tolerance: args.tolerance.or_else(|| env_f64("ENTROSPACE_TOLERANCE")),
        seed: args.seed,
    };
    let outcome = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.file)))
        .and_then(|text| run_str(command, &text, &opts));
    let code = exit_code(&outcome);
    match &outcome {
        Ok(report) => {
            if args.json {
                print!("{}", render_json(report));
            } else {
                print!("{}", render_human(report));
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(code as u8)
}
