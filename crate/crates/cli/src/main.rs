//! Batch front-end for the elastic-plastic torsion solver.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure,
//! 4 partial results (truncated sweep or failed convergence cells).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{cmd_convergence, cmd_reference, cmd_solve, cmd_sweep, resolve_out_dir};
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "torsolve",
    about = "Elastic-plastic Saint-Venant torsion of homogeneous and graded bars",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one twist state and write fields.csv + summary.csv.
    Solve {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Twist as a multiple of the first-yield twist.
        #[arg(long, value_name = "X")]
        theta_ratio: Option<f64>,
        /// Absolute twist per unit length (overrides --theta-ratio).
        #[arg(long, value_name = "THETA")]
        theta: Option<f64>,
        /// Output directory (overrides the config).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Sweep the twist schedule and write curve.csv + per-step field tables.
    Sweep {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Rerun one twist ratio over a grid of discretizations.
    Convergence {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Print closed-form first-yield and fully plastic moments.
    Reference {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve {
            config,
            theta_ratio,
            theta,
            out,
        } => match RunConfig::load(&config) {
            Ok(cfg) => {
                let dir = resolve_out_dir(&cfg, out);
                cmd_solve(&cfg, theta_ratio, theta, &dir)
            }
            Err(e) => {
                eprintln!("torsolve: {e}");
                commands::EXIT_CONFIG
            }
        },
        Command::Sweep { config, out } => match RunConfig::load(&config) {
            Ok(cfg) => {
                let dir = resolve_out_dir(&cfg, out);
                cmd_sweep(&cfg, &dir)
            }
            Err(e) => {
                eprintln!("torsolve: {e}");
                commands::EXIT_CONFIG
            }
        },
        Command::Convergence { config, out } => match RunConfig::load(&config) {
            Ok(cfg) => {
                let dir = resolve_out_dir(&cfg, out);
                cmd_convergence(&cfg, &dir)
            }
            Err(e) => {
                eprintln!("torsolve: {e}");
                commands::EXIT_CONFIG
            }
        },
        Command::Reference { config } => match RunConfig::load(&config) {
            Ok(cfg) => cmd_reference(&cfg),
            Err(e) => {
                eprintln!("torsolve: {e}");
                commands::EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}
