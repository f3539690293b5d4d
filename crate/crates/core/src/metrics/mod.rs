//! Lifetime and coverage-loss metrics for a single run, and their
//! aggregation over a batch of mobility profiles.

mod aggregate;
mod coverage;

pub use aggregate::{aggregate_batch, common_timeline, BatchSummary, CommonTimeline};
pub use coverage::{
    coverage_fraction, uncovered_fraction, update_coverage_loss, CoverageLossCurve, PROBE_COUNT,
};

use serde::{Deserialize, Serialize};

use crate::gatherers::Policy;
use crate::geom::{NodeId, Point, Round};
use crate::topology::is_connected;

/// Wall-clock time at which `round` completes: round 0 ends one period in.
pub fn round_time(round: Round, round_period: f64) -> f64 {
    (round + 1) as f64 * round_period
}

/// Metrics of one policy on one mobility profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub policy: Policy,
    /// Time of the first node failure.
    pub node_lifetime_s: Option<f64>,
    /// First time the live nodes were disconnected while all nodes together
    /// would have been connected. `None` if the run hit the horizon first.
    pub network_lifetime_s: Option<f64>,
    /// `failure_times_s[x - 1]` is the time of the x-th failure.
    pub failure_times_s: Vec<f64>,
    pub coverage_loss: CoverageLossCurve,
    pub discovery_count: usize,
    /// Rounds in which a tree gathered data.
    pub rounds_completed: usize,
    /// Rounds skipped because the live graph could not be spanned.
    pub no_tree_rounds: usize,
    /// Leader of each constructed tree, in construction order.
    pub leaders: Vec<NodeId>,
    pub energy_consumed_j: f64,
}

impl RunResult {
    pub fn rounds_simulated(&self) -> usize {
        self.rounds_completed + self.no_tree_rounds
    }

    pub fn failure_count(&self) -> usize {
        self.failure_times_s.len()
    }
}

/// True iff the live nodes are disconnected while all nodes would be
/// connected at the same positions.
pub fn network_lifetime_check(live: &[NodeId], all_nodes: &[NodeId], positions: &[Point], tx_range: f64) -> bool {
    if live.len() == all_nodes.len() {
        return false;
    }
    !is_connected(live, positions, tx_range) && is_connected(all_nodes, positions, tx_range)
}
