//! Command-line front end for `swanson-core`: parameter sweeps and
//! plot data as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{read_config, Settings};
use crate::error::{CliError, CliResult};
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "swanson",
    version,
    about = "Fermionic Swanson oscillator toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form spectrum, bi-orthogonal norms and region per (alpha, beta)
    Spectrum(Flags),
    /// E^I and E^II along z for each delta
    EnergyCurves(Flags),
    /// Ground-state branch, occupations and mode-1 entropy per (alpha, beta)
    PhaseEntropy(Flags),
    /// Exceptional points of the 4x4 model on an (alpha, beta) grid
    EpScan(Flags),
    /// Trotter error against step count for an open chain
    Trotter(Flags),
}

/// Every flag can also be given as `key = value` in `--config`; flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long = "z-min", allow_hyphen_values = true)]
    pub z_min: Option<String>,
    #[arg(long = "z-max", allow_hyphen_values = true)]
    pub z_max: Option<String>,
    #[arg(long = "z-steps")]
    pub z_steps: Option<String>,
    /// `N` or `NxM` points
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long = "alpha-min", allow_hyphen_values = true)]
    pub alpha_min: Option<String>,
    #[arg(long = "alpha-max", allow_hyphen_values = true)]
    pub alpha_max: Option<String>,
    #[arg(long = "beta-min", allow_hyphen_values = true)]
    pub beta_min: Option<String>,
    #[arg(long = "beta-max", allow_hyphen_values = true)]
    pub beta_max: Option<String>,
    /// `left` or `right`
    #[arg(long)]
    pub norm: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Evolution time
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub sites: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omegas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub betas: Option<String>,
    /// Comma-separated step counts; overrides the n-min..n-max doubling ladder
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long = "n-min")]
    pub n_min: Option<String>,
    #[arg(long = "n-max")]
    pub n_max: Option<String>,
    #[arg(long = "random-chain", num_args = 0..=1, default_missing_value = "true")]
    pub random_chain: Option<String>,
    /// Gap and self-overlap threshold for ep-scan
    #[arg(long)]
    pub tol: Option<String>,
}

impl Flags {
    fn to_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("omega", &self.omega),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("delta", &self.delta),
            ("z-min", &self.z_min),
            ("z-max", &self.z_max),
            ("z-steps", &self.z_steps),
            ("grid", &self.grid),
            ("alpha-min", &self.alpha_min),
            ("alpha-max", &self.alpha_max),
            ("beta-min", &self.beta_min),
            ("beta-max", &self.beta_max),
            ("norm", &self.norm),
            ("out", &self.out),
            ("seed", &self.seed),
            ("t", &self.t),
            ("sites", &self.sites),
            ("omegas", &self.omegas),
            ("alphas", &self.alphas),
            ("betas", &self.betas),
            ("steps", &self.steps),
            ("n-min", &self.n_min),
            ("n-max", &self.n_max),
            ("random-chain", &self.random_chain),
            ("tol", &self.tol),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }

    pub fn settings(&self) -> CliResult<Settings> {
        let file = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        Ok(Settings::merge(file, self.to_map()))
    }
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Spectrum(f)
            | Command::EnergyCurves(f)
            | Command::PhaseEntropy(f)
            | Command::EpScan(f)
            | Command::Trotter(f) => f,
        }
    }
}

pub fn execute(command: &Command, settings: &Settings) -> CliResult<Table> {
    match command {
        Command::Spectrum(_) => commands::spectrum(settings),
        Command::EnergyCurves(_) => commands::energy_curves(settings),
        Command::PhaseEntropy(_) => commands::phase_entropy(settings),
        Command::EpScan(_) => commands::ep_scan(settings),
        Command::Trotter(_) => commands::trotter(settings),
    }
}

/// Run a parsed command, writing CSV to `out` or stdout.
pub fn run(cli: &Cli) -> CliResult<()> {
    let settings = cli.command.flags().settings()?;
    let text = execute(&cli.command, &settings)?.render();
    match settings.raw("out") {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
