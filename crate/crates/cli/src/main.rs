use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photonfluid_cli::{execute, Command};

#[derive(Parser)]
#[command(name = "photonfluid", version, about = "Photon-fluid parameters, spectra and simulations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration (comments allowed).
    #[arg(long)]
    config: PathBuf,
    /// Override a config field, e.g. --set drive.intensity=20. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cavity, medium and fluid parameters.
    Params(Common),
    /// Bogoliubov dispersion curve and its summary.
    Spectrum(Common),
    /// Run the configured simulation scenario.
    Simulate(Common),
    /// Bisect the vortex-shedding onset velocity.
    Sweep(Common),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Cmd::Params(a) => (Command::Params, a),
        Cmd::Spectrum(a) => (Command::Spectrum, a),
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Sweep(a) => (Command::Sweep, a),
    };
    match execute(cmd, &args.config, &args.overrides, &args.out) {
        Ok(out) => {
            print!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("photonfluid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
