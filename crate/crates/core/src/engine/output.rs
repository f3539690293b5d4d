//! Report files written by `run` and `grid`, schema version 1.
//!
//! * `results.csv`: one row per run per metric, columns
//!   `cell,tx_range,v_max,static_count,profile,policy,metric,key,value`.
//!   Metrics: `node_lifetime_s`, `network_lifetime_s` (value `NA` when the
//!   run reached its horizon first), `discovery_count`, `rounds_completed`,
//!   `no_tree_rounds`, `energy_consumed_j`, `failure_time_s` (key = failure
//!   ordinal x), `coverage_loss_time_s` (key = loss fraction). The first
//!   line is a `# dgsim-results v1` comment.
//! * `results.json`: the same rows as an array of objects.
//! * `runs.json`: every [`RunResult`] with its cell and profile index; the
//!   input of `report`.
//! * `summary.json`: per-cell [`BatchSummary`] for both policies and the
//!   common-timeline coverage comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Cell, GridReport};
use crate::error::{Error, Result};
use crate::gatherers::Policy;
use crate::metrics::{aggregate_batch, common_timeline, BatchSummary, RunResult};

pub const RESULTS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredRun {
    pub cell: Cell,
    pub profile: usize,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RunsFile {
    schema_version: u32,
    runs: Vec<StoredRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonTimelineSummary {
    /// Profiles where both policies measured a network lifetime.
    pub pairs: usize,
    pub mean_time_s: f64,
    pub max_stability_mean_fraction: f64,
    pub mst_dg_mean_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: Cell,
    pub max_stability: Option<BatchSummary>,
    pub mst_dg: Option<BatchSummary>,
    pub common_timeline: Option<CommonTimelineSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryFile {
    pub schema_version: u32,
    pub cells: Vec<CellSummary>,
}

#[derive(Serialize)]
struct Row<'a> {
    cell: String,
    tx_range: f64,
    v_max: f64,
    static_count: usize,
    profile: usize,
    policy: Policy,
    metric: &'a str,
    key: String,
    value: String,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn rows(runs: &[StoredRun]) -> Vec<Row<'_>> {
    let mut out = Vec::new();
    for run in runs {
        let r = &run.result;
        let mut push = |metric, key: String, value: String| {
            out.push(Row {
                cell: run.cell.label(),
                tx_range: run.cell.tx_range,
                v_max: run.cell.v_max,
                static_count: run.cell.static_count,
                profile: run.profile,
                policy: r.policy,
                metric,
                key,
                value,
            })
        };
        push("node_lifetime_s", String::new(), opt(r.node_lifetime_s));
        push("network_lifetime_s", String::new(), opt(r.network_lifetime_s));
        push("discovery_count", String::new(), r.discovery_count.to_string());
        push("rounds_completed", String::new(), r.rounds_completed.to_string());
        push("no_tree_rounds", String::new(), r.no_tree_rounds.to_string());
        push("energy_consumed_j", String::new(), r.energy_consumed_j.to_string());
        for (i, t) in r.failure_times_s.iter().enumerate() {
            push("failure_time_s", (i + 1).to_string(), t.to_string());
        }
        for (f, t) in r.coverage_loss.entries() {
            push("coverage_loss_time_s", format!("{f:.2}"), t.to_string());
        }
    }
    out
}

pub fn results_csv(runs: &[StoredRun]) -> String {
    let mut out = format!("# dgsim-results v{RESULTS_SCHEMA_VERSION}\n");
    out.push_str("cell,tx_range,v_max,static_count,profile,policy,metric,key,value\n");
    for r in rows(runs) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.cell, r.tx_range, r.v_max, r.static_count, r.profile, r.policy, r.metric, r.key, r.value
        );
    }
    out
}

pub fn results_json(runs: &[StoredRun]) -> String {
    serde_json::to_string_pretty(&rows(runs)).expect("rows serialize")
}

impl GridReport {
    /// Flattens to stored runs: cell order, then profile, then policy.
    pub fn stored_runs(&self) -> Vec<StoredRun> {
        let mut out = Vec::new();
        for c in &self.cells {
            for pair in &c.runs {
                for result in [&pair.max_stability, &pair.mst_dg] {
                    out.push(StoredRun {
                        cell: c.cell,
                        profile: pair.profile,
                        result: result.clone(),
                    });
                }
            }
        }
        out
    }
}

/// Per-cell summaries from stored runs; cells keep first-seen order.
pub fn summarize_runs(runs: &[StoredRun]) -> Result<SummaryFile> {
    let mut cells: Vec<Cell> = Vec::new();
    for r in runs {
        if !cells.contains(&r.cell) {
            cells.push(r.cell);
        }
    }
    let cells = cells
        .into_iter()
        .map(|cell| {
            let of = |policy| -> Vec<&StoredRun> {
                runs.iter().filter(|r| r.cell == cell && r.result.policy == policy).collect()
            };
            let summarize = |list: &[&StoredRun]| -> Result<Option<BatchSummary>> {
                if list.is_empty() {
                    return Ok(None);
                }
                let results: Vec<RunResult> = list.iter().map(|r| r.result.clone()).collect();
                aggregate_batch(&results).map(Some)
            };
            let max = of(Policy::MaxStability);
            let mst = of(Policy::MstDg);
            let timelines: Vec<_> = max
                .iter()
                .filter_map(|a| {
                    let b = mst.iter().find(|b| b.profile == a.profile)?;
                    common_timeline(&a.result, &b.result)
                })
                .collect();
            let common = (!timelines.is_empty()).then(|| {
                let k = timelines.len() as f64;
                CommonTimelineSummary {
                    pairs: timelines.len(),
                    mean_time_s: timelines.iter().map(|t| t.time_s).sum::<f64>() / k,
                    max_stability_mean_fraction: timelines.iter().map(|t| t.max_stability_fraction).sum::<f64>() / k,
                    mst_dg_mean_fraction: timelines.iter().map(|t| t.mst_dg_fraction).sum::<f64>() / k,
                }
            });
            Ok(CellSummary {
                cell,
                max_stability: summarize(&max)?,
                mst_dg: summarize(&mst)?,
                common_timeline: common,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SummaryFile {
        schema_version: RESULTS_SCHEMA_VERSION,
        cells,
    })
}

pub fn write_runs_json(runs: &[StoredRun], path: &Path) -> Result<()> {
    let doc = RunsFile {
        schema_version: RESULTS_SCHEMA_VERSION,
        runs: runs.to_vec(),
    };
    let text = serde_json::to_string(&doc).expect("runs serialize");
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_runs_json(path: &Path) -> Result<Vec<StoredRun>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: RunsFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if doc.schema_version != RESULTS_SCHEMA_VERSION {
        return Err(Error::Parse {
            location: "schema_version".into(),
            message: format!("unsupported schema version {}", doc.schema_version),
        });
    }
    Ok(doc.runs)
}

/// Writes `results.{csv,json}`, `runs.json` and `summary.json` into `dir`.
pub fn write_grid_outputs(runs: &[StoredRun], dir: &Path, format: OutputFormat) -> Result<SummaryFile> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (name, body) = match format {
        OutputFormat::Csv => ("results.csv", results_csv(runs)),
        OutputFormat::Json => ("results.json", results_json(runs)),
    };
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    write_runs_json(runs, &dir.join("runs.json"))?;
    let summary = summarize_runs(runs)?;
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{update_coverage_loss, CoverageLossCurve};

    fn stored(policy: Policy, profile: usize, lifetime: Option<f64>) -> StoredRun {
        let mut curve = CoverageLossCurve::new();
        update_coverage_loss(&mut curve, 0.02, 3.5);
        StoredRun {
            cell: Cell {
                tx_range: 25.0,
                v_max: 3.0,
                static_count: 0,
            },
            profile,
            result: RunResult {
                policy,
                node_lifetime_s: Some(1.25),
                network_lifetime_s: lifetime,
                failure_times_s: vec![1.25],
                coverage_loss: curve,
                discovery_count: 2,
                rounds_completed: 14,
                no_tree_rounds: 0,
                leaders: vec![3, 1],
                energy_consumed_j: 0.5,
            },
        }
    }

    #[test]
    fn csv_golden() {
        let text = results_csv(&[stored(Policy::MstDg, 0, None)]);
        let expected = "\
# dgsim-results v1
cell,tx_range,v_max,static_count,profile,policy,metric,key,value
tx25-v3-s0,25,3,0,0,mst-dg,node_lifetime_s,,1.25
tx25-v3-s0,25,3,0,0,mst-dg,network_lifetime_s,,NA
tx25-v3-s0,25,3,0,0,mst-dg,discovery_count,,2
tx25-v3-s0,25,3,0,0,mst-dg,rounds_completed,,14
tx25-v3-s0,25,3,0,0,mst-dg,no_tree_rounds,,0
tx25-v3-s0,25,3,0,0,mst-dg,energy_consumed_j,,0.5
tx25-v3-s0,25,3,0,0,mst-dg,failure_time_s,1,1.25
tx25-v3-s0,25,3,0,0,mst-dg,coverage_loss_time_s,0.01,3.5
tx25-v3-s0,25,3,0,0,mst-dg,coverage_loss_time_s,0.02,3.5
";
        assert_eq!(text, expected);
    }

    #[test]
    fn runs_file_round_trip_and_summary() {
        let runs = vec![
            stored(Policy::MaxStability, 0, Some(10.0)),
            stored(Policy::MstDg, 0, Some(8.0)),
        ];
        let dir = tempfile::tempdir().unwrap();
        let summary = write_grid_outputs(&runs, dir.path(), OutputFormat::Json).unwrap();
        assert_eq!(read_runs_json(&dir.path().join("runs.json")).unwrap(), runs);
        assert!(dir.path().join("results.json").exists());
        let c = &summary.cells[0];
        let tl = c.common_timeline.as_ref().unwrap();
        assert_eq!((tl.pairs, tl.mean_time_s), (1, 8.0));
        assert_eq!(tl.max_stability_mean_fraction, 0.02);
        assert_eq!(c.max_stability.as_ref().unwrap().runs, 1);
    }
}
