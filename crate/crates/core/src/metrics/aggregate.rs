use serde::{Deserialize, Serialize};

use super::{CoverageLossCurve, RunResult};
use crate::error::{Error, Result};
use crate::gatherers::Policy;

/// Means and probabilities over a batch of runs of one policy.
///
/// Means are taken over the runs in which the quantity is defined.
/// Index conventions: `failure_probability[x - 1]` is the share of runs with
/// at least `x` failures; `coverage_loss_probability[i]` is the share of
/// runs that reached loss fraction `(i + 1) / 100`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub policy: Option<Policy>,
    pub runs: usize,
    pub mean_node_lifetime_s: Option<f64>,
    pub node_lifetime_runs: usize,
    pub mean_network_lifetime_s: Option<f64>,
    pub network_lifetime_runs: usize,
    pub mean_discovery_count: f64,
    pub mean_rounds_completed: f64,
    pub mean_no_tree_rounds: f64,
    pub failure_probability: Vec<f64>,
    pub mean_failure_time_s: Vec<f64>,
    pub coverage_loss_probability: Vec<f64>,
    pub mean_coverage_loss_time_s: Vec<f64>,
}

fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Per-index mean and share over ragged prefix vectors.
fn ragged(rows: &[&[f64]], total: usize) -> (Vec<f64>, Vec<f64>) {
    let longest = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    (0..longest)
        .map(|i| {
            let hits: Vec<f64> = rows.iter().filter_map(|r| r.get(i).copied()).collect();
            (hits.len() as f64 / total as f64, mean(hits).expect("longest row has index"))
        })
        .unzip()
}

pub fn aggregate_batch(results: &[RunResult]) -> Result<BatchSummary> {
    if results.is_empty() {
        return Err(Error::Usage("cannot aggregate an empty batch".into()));
    }
    let n = results.len();
    let policy = results[0].policy;
    let policy = results.iter().all(|r| r.policy == policy).then_some(policy);

    let failures: Vec<&[f64]> = results.iter().map(|r| r.failure_times_s.as_slice()).collect();
    let (failure_probability, mean_failure_time_s) = ragged(&failures, n);
    let coverage: Vec<&[f64]> = results.iter().map(|r| r.coverage_loss.times()).collect();
    let (coverage_loss_probability, mean_coverage_loss_time_s) = ragged(&coverage, n);

    Ok(BatchSummary {
        policy,
        runs: n,
        mean_node_lifetime_s: mean(results.iter().filter_map(|r| r.node_lifetime_s)),
        node_lifetime_runs: results.iter().filter(|r| r.node_lifetime_s.is_some()).count(),
        mean_network_lifetime_s: mean(results.iter().filter_map(|r| r.network_lifetime_s)),
        network_lifetime_runs: results.iter().filter(|r| r.network_lifetime_s.is_some()).count(),
        mean_discovery_count: mean(results.iter().map(|r| r.discovery_count as f64)).unwrap_or(0.0),
        mean_rounds_completed: mean(results.iter().map(|r| r.rounds_completed as f64)).unwrap_or(0.0),
        mean_no_tree_rounds: mean(results.iter().map(|r| r.no_tree_rounds as f64)).unwrap_or(0.0),
        failure_probability,
        mean_failure_time_s,
        coverage_loss_probability,
        mean_coverage_loss_time_s,
    })
}

/// Coverage loss of both policies at the earlier of their two network
/// lifetimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommonTimeline {
    pub time_s: f64,
    pub max_stability_fraction: f64,
    pub mst_dg_fraction: f64,
}

/// `None` unless both runs measured a network lifetime.
pub fn common_timeline(max_stability: &RunResult, mst_dg: &RunResult) -> Option<CommonTimeline> {
    let t = max_stability.network_lifetime_s?.min(mst_dg.network_lifetime_s?);
    let at = |c: &CoverageLossCurve| c.fraction_at(t);
    Some(CommonTimeline {
        time_s: t,
        max_stability_fraction: at(&max_stability.coverage_loss),
        mst_dg_fraction: at(&mst_dg.coverage_loss),
    })
}
