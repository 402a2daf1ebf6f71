use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ldg_cli::config::{parse_config, Mode};
use ldg_cli::drivers::{dispatch, DriverError};

/// LDG solver for 1D convection-diffusion systems with theta-weighted fluxes.
#[derive(Parser)]
#[command(name = "ldg", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate once and write a solution snapshot at t_end
    Run(ModeArgs),
    /// Refine over the configured cell counts and tabulate errors and orders
    Convergence(ModeArgs),
    /// Accuracy ladder for the projection operators
    Projtest(ModeArgs),
    /// Residuals of the discrete flux identities on random data
    Fluxtest(ModeArgs),
    /// Error against the exact solution sampled along the time axis
    History(ModeArgs),
}

#[derive(Args)]
struct ModeArgs {
    /// Path to a `key = value` config file
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here (overrides `out` from the config; default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RUN: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.cmd {
        Cmd::Run(a) => (Mode::Run, a),
        Cmd::Convergence(a) => (Mode::Convergence, a),
        Cmd::Projtest(a) => (Mode::Projtest, a),
        Cmd::Fluxtest(a) => (Mode::Fluxtest, a),
        Cmd::History(a) => (Mode::History, a),
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ldg: cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = match parse_config(&text, mode) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ldg: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let csv = match dispatch(&cfg) {
        Ok(csv) => csv,
        Err(e @ DriverError::Config(_)) => {
            eprintln!("ldg: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e @ DriverError::Run(_)) => {
            eprintln!("ldg: {e}");
            return ExitCode::from(EXIT_RUN);
        }
    };

    let out_path = args.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    match out_path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, &csv) {
                eprintln!("ldg: cannot write {}: {e}", p.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}
