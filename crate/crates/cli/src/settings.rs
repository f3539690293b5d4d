//! Flag parsing and the TOML config file that mirrors the flags.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dgsim_core::engine::OutputFormat;
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyChoice {
    MaxStability,
    MstDg,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatChoice {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Transmission range in metres; comma-separated for a sweep.
    #[arg(long, value_delimiter = ',')]
    pub tx_range: Option<Vec<f64>>,
    /// Maximum node speed in m/s; comma-separated for a sweep.
    #[arg(long, value_delimiter = ',')]
    pub vmax: Option<Vec<f64>>,
    /// Number of nodes that never move; comma-separated for a sweep.
    #[arg(long, value_delimiter = ',')]
    pub static_nodes: Option<Vec<usize>>,
    /// Profiles per cell.
    #[arg(long)]
    pub profiles: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulated duration in seconds.
    #[arg(long)]
    pub horizon_s: Option<f64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyChoice>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatChoice>,
    /// Unlimited batteries, for stability-only studies.
    #[arg(long)]
    pub sufficient_energy: bool,
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
    #[default]
    None,
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Option<Vec<T>> {
        match self {
            OneOrMany::One(v) => Some(vec![v]),
            OneOrMany::Many(v) => Some(v),
            OneOrMany::None => None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    tx_range: OneOrMany<f64>,
    #[serde(default)]
    vmax: OneOrMany<f64>,
    #[serde(default)]
    static_nodes: OneOrMany<usize>,
    profiles: Option<usize>,
    seed: Option<u64>,
    horizon_s: Option<f64>,
    policy: Option<PolicyChoice>,
    out: Option<PathBuf>,
    format: Option<FormatChoice>,
    sufficient_energy: Option<bool>,
    profile: Option<PathBuf>,
    trace: Option<PathBuf>,
    energy_csv: Option<PathBuf>,
}

/// Flags merged over the config file merged over built-in defaults.
#[derive(Debug)]
pub struct Settings {
    /// `None` when neither flag nor file set the axis.
    pub tx_range: Option<Vec<f64>>,
    pub vmax: Option<Vec<f64>>,
    pub static_nodes: Option<Vec<usize>>,
    pub profiles: usize,
    pub seed: u64,
    pub horizon_s: Option<f64>,
    pub policy: PolicyChoice,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub sufficient_energy: bool,
    pub profile: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub energy_csv: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> CliResult<Settings> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Args(format!("i/o error on {}: {e}", path.display())))?;
                toml::from_str::<ConfigFile>(&text).map_err(|e| {
                    CliError::Core(dgsim_core::Error::Parse {
                        location: path.display().to_string(),
                        message: e.message().to_string(),
                    })
                })?
            }
            None => ConfigFile::default(),
        };
        let format = args.format.or(file.format).unwrap_or(FormatChoice::Csv);
        Ok(Settings {
            tx_range: args.tx_range.clone().or(file.tx_range.into_vec()),
            vmax: args.vmax.clone().or(file.vmax.into_vec()),
            static_nodes: args.static_nodes.clone().or(file.static_nodes.into_vec()),
            profiles: args.profiles.or(file.profiles).unwrap_or(20),
            seed: args.seed.or(file.seed).unwrap_or(0),
            horizon_s: args.horizon_s.or(file.horizon_s),
            policy: args.policy.or(file.policy).unwrap_or(PolicyChoice::Both),
            out: args.out.clone().or(file.out),
            format: match format {
                FormatChoice::Csv => OutputFormat::Csv,
                FormatChoice::Json => OutputFormat::Json,
            },
            sufficient_energy: args.sufficient_energy || file.sufficient_energy.unwrap_or(false),
            profile: file.profile,
            trace: file.trace,
            energy_csv: file.energy_csv,
        })
    }
}
