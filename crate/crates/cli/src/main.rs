//! `dgsim`: generate mobility profiles, run single simulations or the full
//! experiment grid, and post-process stored results.
//!
//! Every subcommand accepts `--config <file.toml>` whose keys mirror the
//! long flag names (`tx-range = [25, 40]`, `sufficient-energy = true`, ...).
//! Flags given on the command line win over the file.
//!
//! On failure the process exits nonzero and prints one JSON object on
//! stderr: `{"error":{"kind":"config","message":"..."}}`.

mod settings;

use std::fs::{self, File};
use std::fmt::Write as _;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgsim_core::engine::{
    read_runs_json, results_csv, results_json, run_detailed, run_grid, summarize_runs, write_grid_outputs, Cell,
    EnergyCsv, ExperimentGrid, NoObserver, OutputFormat, RoundObserver, SimConfig, StoredRun,
};
use dgsim_core::gatherers::format_tree_trace;
use dgsim_core::mobility::{generate_profile, load_profile, save_profile, ProfileFormat};
use dgsim_core::{Error, Policy};

use settings::{CommonArgs, PolicyChoice, Settings};

#[derive(Parser)]
#[command(name = "dgsim", version, about = "Data-gathering tree simulator for mobile sensor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded mobility profiles, one file per profile.
    GenProfiles {
        #[command(flatten)]
        common: CommonArgs,
        /// Write JSON profiles instead of the compact binary format.
        #[arg(long)]
        json: bool,
    },
    /// Run one configuration against one profile.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Profile file to replay; generated from the seed when absent.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Write the tree epoch log here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write per-round residual energy here (single policy only).
        #[arg(long)]
        energy_csv: Option<PathBuf>,
    },
    /// Sweep the cross product of ranges, speeds and static counts.
    Grid {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summarize a stored `runs.json`.
    Report {
        /// `runs.json` written by `run` or `grid`.
        runs: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Args(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Args(_) => "usage",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Args(m) => m.clone(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Args(format!("i/o error on {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", &e.to_string().trim_end().to_string());
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(e.kind(), &e.message());
            ExitCode::from(if matches!(e.kind(), "usage" | "config") { 2 } else { 1 })
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let line = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{line}");
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::GenProfiles { common, json } => gen_profiles(&Settings::resolve(&common)?, json),
        Command::Run {
            common,
            profile,
            trace,
            energy_csv,
        } => {
            let s = Settings::resolve(&common)?;
            run_one(&s, profile.or(s.profile.clone()), trace.or(s.trace.clone()), energy_csv.or(s.energy_csv.clone()))
        }
        Command::Grid { common } => grid(&Settings::resolve(&common)?),
        Command::Report { runs, common } => report(&runs, &Settings::resolve(&common)?),
    }
}

fn gen_profiles(s: &Settings, json: bool) -> CliResult<()> {
    let out = s.out_dir()?;
    fs::create_dir_all(&out).map_err(io_err(&out))?;
    let grid = s.grid();
    let (format, ext) = if json { (ProfileFormat::Json, "json") } else { (ProfileFormat::Binary, "dgp") };
    for &v_max in &grid.v_max {
        for &static_count in &grid.static_counts {
            let cell = Cell {
                tx_range: grid.tx_ranges[0],
                v_max,
                static_count,
            };
            for index in 0..grid.profiles_per_cell {
                let mobility = grid.mobility_for(&cell, index);
                let profile = generate_profile(grid.base.field.clone(), mobility)?;
                let path = out.join(format!("profile-v{v_max}-s{static_count}-{index:03}.{ext}"));
                save_profile(&profile, &path, format)?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn run_one(s: &Settings, profile_path: Option<PathBuf>, trace: Option<PathBuf>, energy_csv: Option<PathBuf>) -> CliResult<()> {
    let cell = s.single_cell()?;
    let grid = ExperimentGrid {
        tx_ranges: vec![cell.tx_range],
        v_max: vec![cell.v_max],
        static_counts: vec![cell.static_count],
        ..s.grid()
    };
    let policies = s.policy.policies();
    if energy_csv.is_some() && policies.len() != 1 {
        return Err(CliError::Args("--energy-csv needs a single --policy".into()));
    }
    let (profile, mut cfg) = match &profile_path {
        Some(path) => {
            let profile = load_profile(path)?;
            let cfg = SimConfig {
                field: profile.field().clone(),
                mobility: profile.mobility().clone(),
                tx_range: cell.tx_range,
                run_seed: s.seed,
                ..grid.base.clone()
            };
            (profile, cfg)
        }
        None => {
            let cfg = grid.config_for(&cell, Policy::MaxStability, 0);
            (generate_profile(cfg.field.clone(), cfg.mobility.clone())?, cfg)
        }
    };
    if let Some(h) = s.horizon_rounds() {
        if profile_path.is_some() && h > profile.horizon() {
            return Err(CliError::Args(format!(
                "--horizon-s asks for {h} rounds but the profile holds {}",
                profile.horizon()
            )));
        }
        cfg.mobility.horizon_rounds = h;
    }
    let cell = Cell {
        v_max: cfg.mobility.v_max,
        static_count: cfg.mobility.static_count,
        ..cell
    };

    let mut runs = Vec::new();
    let mut epochs = Vec::new();
    for policy in policies {
        cfg.policy = policy;
        let output = match &energy_csv {
            Some(path) => {
                let file = File::create(path).map_err(io_err(path))?;
                let mut obs = EnergyCsv::new(BufWriter::new(file));
                let out = run_detailed(&cfg, &profile, &mut obs as &mut dyn RoundObserver)?;
                obs.finish().map_err(io_err(path))?;
                out
            }
            None => run_detailed(&cfg, &profile, &mut NoObserver)?,
        };
        epochs.extend(output.epochs);
        runs.push(StoredRun {
            cell,
            profile: 0,
            result: output.result,
        });
    }
    if let Some(path) = &trace {
        fs::write(path, format_tree_trace(&epochs)).map_err(io_err(path))?;
    }
    emit(s, &runs)
}

fn grid(s: &Settings) -> CliResult<()> {
    let report = run_grid(&s.grid())?;
    let policies = s.policy.policies();
    let runs: Vec<StoredRun> = report
        .stored_runs()
        .into_iter()
        .filter(|r| policies.contains(&r.result.policy))
        .collect();
    emit(s, &runs)
}

/// Writes report files to `--out`, or prints results to stdout without it.
fn emit(s: &Settings, runs: &[StoredRun]) -> CliResult<()> {
    match &s.out {
        Some(dir) => {
            write_grid_outputs(runs, dir, s.format)?;
        }
        None => {
            let text = match s.format {
                OutputFormat::Csv => results_csv(runs),
                OutputFormat::Json => results_json(runs) + "\n",
            };
            std::io::stdout().write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
        }
    }
    Ok(())
}

fn report(runs_path: &Path, s: &Settings) -> CliResult<()> {
    let runs = read_runs_json(runs_path)?;
    let summary = summarize_runs(&runs)?;
    if let Some(dir) = &s.out {
        write_grid_outputs(&runs, dir, s.format)?;
    }
    let mut out = String::new();
    match s.format {
        OutputFormat::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
        }
        OutputFormat::Csv => {
            let _ = writeln!(out, "cell,policy,runs,mean_node_lifetime_s,mean_network_lifetime_s,mean_discovery_count,common_time_s,common_coverage_loss");
            for c in &summary.cells {
                for (policy, b) in [(Policy::MaxStability, &c.max_stability), (Policy::MstDg, &c.mst_dg)] {
                    let Some(b) = b else { continue };
                    let (t, f) = match &c.common_timeline {
                        Some(tl) => (
                            tl.mean_time_s.to_string(),
                            match policy {
                                Policy::MaxStability => tl.max_stability_mean_fraction,
                                Policy::MstDg => tl.mst_dg_mean_fraction,
                            }
                            .to_string(),
                        ),
                        None => ("NA".into(), "NA".into()),
                    };
                    let opt = |v: Option<f64>| v.map_or("NA".to_string(), |v| v.to_string());
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        c.cell.label(),
                        policy,
                        b.runs,
                        opt(b.mean_node_lifetime_s),
                        opt(b.mean_network_lifetime_s),
                        b.mean_discovery_count,
                        t,
                        f
                    );
                }
            }
        }
    }
    std::io::stdout().write_all(out.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(())
}

impl PolicyChoice {
    fn policies(self) -> Vec<Policy> {
        match self {
            PolicyChoice::Both => Policy::ALL.to_vec(),
            PolicyChoice::MaxStability => vec![Policy::MaxStability],
            PolicyChoice::MstDg => vec![Policy::MstDg],
        }
    }
}

impl Settings {
    /// Axes left unset take the full default sweep.
    fn grid(&self) -> ExperimentGrid {
        let d = ExperimentGrid::default();
        let mut grid = ExperimentGrid {
            tx_ranges: self.tx_range.clone().unwrap_or(d.tx_ranges),
            v_max: self.vmax.clone().unwrap_or(d.v_max),
            static_counts: self.static_nodes.clone().unwrap_or(d.static_counts),
            profiles_per_cell: self.profiles,
            base_seed: self.seed,
            base: d.base,
        };
        grid.base.sufficient_energy = self.sufficient_energy;
        if let Some(h) = self.horizon_rounds() {
            grid.base.mobility.horizon_rounds = h;
        }
        grid
    }

    fn horizon_rounds(&self) -> Option<usize> {
        let period = SimConfig::default().mobility.round_period;
        self.horizon_s.map(|h| (h / period).round() as usize)
    }

    /// Unset axes take the first value of the default sweep.
    fn single_cell(&self) -> CliResult<Cell> {
        fn one<T: Copy>(values: &Option<Vec<T>>, default: T, flag: &str) -> CliResult<T> {
            match values.as_deref() {
                None => Ok(default),
                Some([v]) => Ok(*v),
                Some(_) => Err(CliError::Args(format!("`run` takes a single value for --{flag}"))),
            }
        }
        Ok(Cell {
            tx_range: one(&self.tx_range, 25.0, "tx-range")?,
            v_max: one(&self.vmax, 3.0, "vmax")?,
            static_count: one(&self.static_nodes, 0, "static-nodes")?,
        })
    }

    fn out_dir(&self) -> CliResult<PathBuf> {
        self.out.clone().ok_or_else(|| CliError::Args("--out is required".into()))
    }
}
