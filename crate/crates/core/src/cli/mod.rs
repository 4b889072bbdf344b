//! Scenario runner behind the `cpbs` binary.

mod config;
mod output;
mod scenarios;

use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{
    default_benchmark, DephasingSettings, DynamicsSettings, OutputSettings, PropagatorKind, Scenario, ScenarioConfig,
    Settings,
};
pub use output::fmt_f64;
pub use scenarios::{dephasing_trajectory, full_trajectory, run_scenario, two_qubit_observables};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Model(_) => "parameters",
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => "output",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(_) => 3,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => 4,
            CliError::Internal(_) => 70,
        }
    }

    /// `error[kind]: message` on one line.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error[{}]: {msg}", self.kind())
    }
}

/// Reproduces the double-dot entanglement data sets.
#[derive(Debug, Parser)]
#[command(name = "cpbs", version, about)]
pub struct Args {
    /// Scenario to run.
    #[arg(value_enum)]
    pub scenario: Scenario,
    /// TOML configuration; benchmark defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `section.key=value` override; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Args {
    pub fn into_config(self) -> Result<ScenarioConfig, CliError> {
        let text = match &self.config {
            Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        let mut settings = Settings::parse(&text, &self.set)?;
        if let Some(out) = self.out {
            settings.output.dir = out;
        }
        Ok(ScenarioConfig {
            scenario: self.scenario,
            settings,
        })
    }
}

/// Parses `argv`, runs the scenario, prints written paths. Returns the
/// process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.kind().to_string();
            let detail = e
                .to_string()
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("error[usage]: {}", if detail.is_empty() { msg } else { detail });
            return 2;
        }
    };
    match args.into_config().and_then(|c| run_scenario(&c)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.one_line());
            e.exit_code()
        }
    }
}
