//! `eqm`: run spin, measurement, inference, reconstruction and scenario jobs
//! from JSON configs.
//!
//! Exit codes: 0 success, 2 invalid input or unwritable output, 3 a
//! verification check failed (the report is still written).

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::SystemSource;
use crate::config::{ScenarioConfig, SpinConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "eqm", version, about = "Question-answer quantum states from e-variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON job configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for every random draw; overrides a seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file. Reports go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and question-answer kets of J^a for spin j.
    Spin {
        #[command(flatten)]
        common: Common,
        /// Spin, e.g. `1/2`, `1`, `3/2`. Overrides the config.
        #[arg(long)]
        j: Option<String>,
        /// Direction `x,y,z`. Overrides the config.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
        /// Rescale the direction to unit length.
        #[arg(long)]
        normalize: bool,
    },
    /// Born probabilities and seeded samples. `--out` names the samples CSV;
    /// probabilities go to `<stem>.probabilities.json` beside it.
    Measure {
        #[command(flatten)]
        common: Common,
    },
    /// Posterior, MLE and credibility set from a data CSV.
    Infer {
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert-space reconstruction checks on a finite system. `--config` is
    /// the system JSON.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// A shipped system instead of `--config`.
        #[arg(long, conflicts_with = "config")]
        fixture: Option<String>,
    },
    /// Observer states for `cat`, `wigner` or `two-slit`.
    Scenario {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        name: Option<String>,
        /// Answer found by the informed observer; drawn with the seed if absent.
        #[arg(long)]
        outcome: Option<String>,
    },
}

fn require(config: &Option<PathBuf>, command: &str) -> Result<PathBuf, CliError> {
    config
        .clone()
        .ok_or_else(|| CliError::Validation(format!("{command} needs --config <path>")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spin {
            common,
            j,
            direction,
            normalize,
        } => {
            if direction.as_ref().is_some_and(|d| d.len() != 3) {
                return Err(CliError::Validation("--direction takes three comma-separated numbers".into()));
            }
            let cfg = match (&common.config, j, direction) {
                (_, Some(j), Some(d)) => SpinConfig {
                    j: commands::spin_value(&j),
                    direction: [d[0], d[1], d[2]],
                    normalize,
                },
                (Some(path), j, d) => {
                    let mut cfg: SpinConfig = config::load(path)?;
                    if let Some(j) = j {
                        cfg.j = commands::spin_value(&j);
                    }
                    if let Some(d) = d {
                        cfg.direction = [d[0], d[1], d[2]];
                    }
                    cfg.normalize |= normalize;
                    cfg
                }
                (None, _, _) => return Err(CliError::Validation("spin needs --config or both --j and --direction".into())),
            };
            commands::spin(&cfg, common.out.as_deref())
        }
        Command::Measure { common } => {
            let cfg = config::load(&require(&common.config, "measure")?)?;
            commands::measure(&cfg, common.seed, common.out.as_deref())
        }
        Command::Infer { common } => {
            let path = require(&common.config, "infer")?;
            let cfg = config::load(&path)?;
            commands::infer_cmd(&cfg, &path, common.out.as_deref())
        }
        Command::Reconstruct { common, fixture } => {
            let source = match (&fixture, &common.config) {
                (Some(name), _) => SystemSource::Fixture(name),
                (None, Some(path)) => SystemSource::File(path),
                (None, None) => return Err(CliError::Validation("reconstruct needs --config or --fixture".into())),
            };
            commands::reconstruct_cmd(source, common.out.as_deref())
        }
        Command::Scenario { common, name, outcome } => {
            let mut cfg = match &common.config {
                Some(path) => config::load(path)?,
                None => ScenarioConfig {
                    name: String::new(),
                    outcome: None,
                    seed: None,
                },
            };
            if let Some(n) = name {
                cfg.name = n;
            }
            if outcome.is_some() {
                cfg.outcome = outcome;
            }
            if cfg.name.is_empty() {
                return Err(CliError::Validation("scenario needs --name or --config".into()));
            }
            commands::scenario(&cfg, common.seed, common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eqm: {e}");
            e.exit_code()
        }
    }
}
