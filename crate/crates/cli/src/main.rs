use std::path::PathBuf;
use std::process::ExitCode;

use bend_cli::{execute, Command, RunConfig};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Classify,
    Volume,
    Plot,
    Sandwich,
    Bendcheck,
}

/// Bending deformations, cusp classification and Hilbert volume.
#[derive(Debug, Parser)]
#[command(name = "bend", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// Configuration file, or `bundled:<name>`.
    #[arg(long)]
    input: String,
    /// Comma-separated bending parameters.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    t: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        CommandArg::Classify => Command::Classify,
        CommandArg::Volume => Command::Volume,
        CommandArg::Plot => Command::Plot,
        CommandArg::Sandwich => Command::Sandwich,
        CommandArg::Bendcheck => Command::Bendcheck,
    };
    let config = RunConfig { command, input: args.input, t_values: args.t, seed: args.seed, tolerance: args.tol, out: args.out };
    match execute(&config) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(3))
        }
    }
}
