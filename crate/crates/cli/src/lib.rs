//! `spectral-lab`: a configuration-driven runner exposing the
//! approximation-theory checks, Ritz experiments, counterexample series,
//! and inverse-rate measurements as reproducible commands.
//!
//! Each invocation reads one TOML config, runs one experiment, and writes
//! machine-readable CSV/JSON (plus a gnuplot script where a plot makes
//! sense) into an output directory.  Identical config and seed produce
//! byte-identical files.
//!
//! Exit codes: `0` all checks passed, `1` configuration error, `2` at
//! least one inequality violated, `3` a numerical guard failed (reported
//! even when violations are also present, since a failed guard undermines
//! the other verdicts).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub mod config;
pub mod output;
pub mod runner;

use config::ExperimentConfig;
use runner::RunOutcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Library(#[from] spectral_approx::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "spectral-lab",
    about = "Reproducible experiments for spectral approximation bounds",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify kernel / Bernstein-type / Jackson-type inequalities over
    /// configured grids and corpora.
    CheckInequalities(RunArgs),
    /// Solve a Sturm-Liouville problem by the Ritz method and check the
    /// sandwich and a priori error bounds.
    RitzRun(RunArgs),
    /// Tabulate the explicit series with logarithmically slow Ritz
    /// convergence.
    Counterexample(RunArgs),
    /// Measure moduli of continuity of extremal vectors against the
    /// inverse-theorem envelope.
    InverseRate(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Path to the experiment config (TOML, one experiment per file).
    pub config: PathBuf,
    /// Output directory (overrides `out_dir` from the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for parameter sweeps (default: rayon's choice).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Command {
    fn slug(&self) -> &'static str {
        match self {
            Command::CheckInequalities(_) => "check-inequalities",
            Command::RitzRun(_) => "ritz-run",
            Command::Counterexample(_) => "counterexample",
            Command::InverseRate(_) => "inverse-rate",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::CheckInequalities(a)
            | Command::RitzRun(a)
            | Command::Counterexample(a)
            | Command::InverseRate(a) => a,
        }
    }
}

/// Entry point over explicit arguments; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            }
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            for line in &outcome.violations {
                eprintln!("violation: {line}");
            }
            if let Some(advice) = &outcome.guard_advice {
                eprintln!("guard failure: {advice}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<RunOutcome, CliError> {
    let args = cli.command.args();
    let config = ExperimentConfig::load(&args.config)?;
    if config.command != cli.command.slug() {
        return Err(CliError::Config(format!(
            "config is for command '{}', but '{}' was invoked",
            config.command,
            cli.command.slug()
        )));
    }

    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;

    let runner = || match cli.command {
        Command::CheckInequalities(_) => runner::run_inequalities(&config, &out_dir),
        Command::RitzRun(_) => runner::run_ritz(&config, &out_dir),
        Command::Counterexample(_) => runner::run_counterexample(&config, &out_dir),
        Command::InverseRate(_) => runner::run_inverse(&config, &out_dir),
    };

    match args.jobs {
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;
            pool.install(runner)
        }
        None => runner(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_from(["spectral-lab", "--help"]), 0);
    }

    #[test]
    fn usage_error_exits_one() {
        assert_eq!(run_from(["spectral-lab", "no-such-command"]), 1);
        assert_eq!(run_from(["spectral-lab"]), 1);
    }

    #[test]
    fn missing_config_exits_one() {
        assert_eq!(
            run_from(["spectral-lab", "check-inequalities", "/nonexistent/config.toml"]),
            1
        );
    }
}
