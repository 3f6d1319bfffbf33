//! Command-line front-end for discrete-series packets and endoscopic
//! character identities: JSON configurations in, summaries and JSON reports
//! out.

pub mod commands;
pub mod config;

use clap::{Parser, Subcommand};
use commands::{CommandError, Outcome};
use config::JobConfig;
use std::path::PathBuf;

/// Command-line interface.
#[derive(Debug, Parser)]
#[command(name = "dsendo", version, about = "Discrete-series packets and endoscopic character identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by all subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// JSON job configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Number of sampled torus points (overrides the configuration).
    #[arg(long)]
    pub samples: Option<usize>,
    /// PRNG seed (overrides the configuration).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual tolerance (overrides the configuration).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root datum, dual datum, Weyl group, forms, cohomology and component groups.
    Describe(CommonArgs),
    /// Packet members with classes, pairings and genericity.
    Packet(CommonArgs),
    /// Endoscopic data for the configured s and for all of S^[2].
    Endoscopy(CommonArgs),
    /// Numerical verification of the endoscopic character identity.
    Verify(CommonArgs),
    /// Comparison of the combinatorial rules with the brute-force matrix models.
    Oracle(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Describe(a) | Command::Packet(a) | Command::Endoscopy(a) | Command::Verify(a) | Command::Oracle(a) => a,
        }
    }
}

/// Loads the configuration, applies flag overrides and runs the command.
pub fn run(cmd: &Command) -> Result<Outcome, CommandError> {
    let args = cmd.args();
    let mut cfg = JobConfig::from_path(&args.config)?;
    if args.samples.is_some() {
        cfg.samples = args.samples;
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.tol.is_some() {
        cfg.tolerance = args.tol;
    }
    let outcome = match cmd {
        Command::Describe(_) => commands::describe(&cfg)?,
        Command::Packet(_) => commands::packet(&cfg)?,
        Command::Endoscopy(_) => commands::endoscopy(&cfg)?,
        Command::Verify(_) => commands::verify(&cfg)?,
        Command::Oracle(_) => commands::oracle(&cfg)?,
    };
    if let Some(path) = &args.out {
        let mut json = serde_json::to_string_pretty(&outcome.report).map_err(|e| CommandError::Output(e.to_string()))?;
        json.push('\n');
        std::fs::write(path, json).map_err(|e| CommandError::Output(format!("{}: {e}", path.display())))?;
    }
    Ok(outcome)
}
