//! Tree-construction policies.
//!
//! Both policies build a spanning tree over the live nodes, root it at a
//! random leader and keep it until it stops being usable. They differ only
//! in the graph the spanning tree is drawn from:
//!
//! * [`Policy::MaxStability`] looks ahead through the mobility profile and
//!   takes the minimum-weight tree of the longest-lived intersection window
//!   starting now.
//! * [`Policy::MstDg`] takes the minimum-distance tree of the current
//!   snapshot and keeps it until an edge stretches out of range or a node
//!   dies.

mod epoch;
mod trace;

pub use epoch::{max_stability_find_epoch, PositionHorizon, StableEpoch, TopologyHorizon};
pub use trace::{format_tree_trace, parse_tree_trace, EpochRecord};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom::{within_range, NodeId, Point, Round};
use crate::rng::SimRng;
use crate::topology::{bfs_root, build_static_graph, prim_mst, RootedTree, SpanningTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    MaxStability,
    MstDg,
}

impl Policy {
    pub const ALL: [Policy; 2] = [Policy::MaxStability, Policy::MstDg];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::MaxStability => "max-stability",
            Policy::MstDg => "mst-dg",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max-stability" => Ok(Policy::MaxStability),
            "mst-dg" => Ok(Policy::MstDg),
            other => Err(format!("unknown policy `{other}`")),
        }
    }
}

/// A rooted data-gathering tree and the rounds it is meant to serve.
#[derive(Debug, Clone, PartialEq)]
pub struct DgTree {
    pub rooted: RootedTree,
    pub spanning: SpanningTree,
    pub epoch_start: Round,
    /// Last round of the epoch; open for MST-DG trees still in use.
    pub epoch_end: Option<Round>,
}

impl DgTree {
    pub fn leader(&self) -> NodeId {
        self.rooted.leader()
    }
}

/// True iff every tree node is live and every tree edge is within range at
/// `positions`.
pub fn tree_valid(tree: &DgTree, positions: &[Point], is_live: impl Fn(NodeId) -> bool, tx_range: f64) -> bool {
    tree.spanning.nodes().iter().all(|&n| is_live(n))
        && tree
            .spanning
            .edges()
            .iter()
            .all(|e| within_range(positions[e.u], positions[e.v], tx_range))
}

fn root_randomly(spanning: SpanningTree, start: Round, end: Option<Round>, rng: &mut SimRng) -> DgTree {
    let nodes = spanning.nodes();
    let leader = nodes[rng.index_below(nodes.len())];
    let rooted = bfs_root(&spanning, leader).expect("leader drawn from the tree");
    DgTree {
        rooted,
        spanning,
        epoch_start: start,
        epoch_end: end,
    }
}

/// Per-run policy state: the tree in use, the discovery count and the epoch log.
#[derive(Debug)]
pub struct GathererState<'a> {
    policy: Policy,
    horizon: PositionHorizon<'a>,
    tx_range: f64,
    current: Option<DgTree>,
    discovery_count: usize,
    epochs: Vec<EpochRecord>,
}

impl<'a> GathererState<'a> {
    pub fn new(policy: Policy, horizon: PositionHorizon<'a>) -> Self {
        let tx_range = horizon.tx_range();
        GathererState {
            policy,
            horizon,
            tx_range,
            current: None,
            discovery_count: 0,
            epochs: Vec::new(),
        }
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn current(&self) -> Option<&DgTree> {
        self.current.as_ref()
    }

    /// Number of trees constructed so far; each one costs a network-wide flood.
    pub fn discovery_count(&self) -> usize {
        self.discovery_count
    }

    pub fn epochs(&self) -> &[EpochRecord] {
        &self.epochs
    }

    /// Whether the current tree may gather at `round`.
    pub fn current_valid(&self, round: Round, positions: &[Point], is_live: impl Fn(NodeId) -> bool) -> bool {
        let Some(tree) = &self.current else {
            return false;
        };
        if tree.epoch_end.is_some_and(|end| round > end) {
            return false;
        }
        tree_valid(tree, positions, is_live, self.tx_range)
    }

    /// Drops the current tree and closes its epoch at `stop` (exclusive).
    pub fn retire(&mut self, stop: Round) {
        if self.current.take().is_some() {
            if let Some(rec) = self.epochs.last_mut() {
                rec.stop = Some(rec.stop.map_or(stop, |s| s.min(stop)));
            }
        }
    }

    /// Closes the epoch log at the end of a run; `stop` is one past the last
    /// simulated round.
    pub fn finish(&mut self, stop: Round) {
        if let Some(rec) = self.epochs.last_mut() {
            rec.stop = Some(rec.stop.map_or(stop, |s| s.min(stop)));
        }
        self.current = None;
    }

    /// Builds the next tree at `round` over `live`, or `None` if the live
    /// graph cannot be spanned.
    pub fn next_tree(&mut self, round: Round, live: &[NodeId], rng: &mut SimRng) -> Option<&DgTree> {
        let tree = match self.policy {
            Policy::MaxStability => max_stability_next_tree(&self.horizon, round, live, rng),
            Policy::MstDg => mst_dg_next_tree(self.horizon.positions(round), round, live, self.tx_range, rng),
        }?;
        self.discovery_count += 1;
        self.epochs.push(EpochRecord::open(self.policy, &tree));
        self.current = Some(tree);
        self.current.as_ref()
    }
}

/// Longest-lived tree from `round`, over the live nodes only.
pub fn max_stability_next_tree<H: TopologyHorizon + ?Sized>(
    horizon: &H,
    round: Round,
    live: &[NodeId],
    rng: &mut SimRng,
) -> Option<DgTree> {
    let epoch = max_stability_find_epoch(horizon, round, live)?;
    Some(root_randomly(epoch.tree, round, Some(epoch.end), rng))
}

/// Minimum-distance tree of the snapshot at `round`.
pub fn mst_dg_next_tree(
    positions: &[Point],
    round: Round,
    live: &[NodeId],
    tx_range: f64,
    rng: &mut SimRng,
) -> Option<DgTree> {
    if live.is_empty() {
        return None;
    }
    let snapshot = build_static_graph(round, positions, live, tx_range);
    let spanning = prim_mst(&snapshot).ok()?;
    Some(root_randomly(spanning, round, None, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobility::{generate_profile, FieldConfig, MobilityConfig, MobilityProfile};
    use crate::rng::Stream;

    fn static_profile(points: &[(f64, f64)], horizon: usize) -> MobilityProfile {
        let n = points.len();
        let mob = MobilityConfig {
            node_count: n,
            static_count: n,
            v_max: 1.0,
            round_period: 0.25,
            horizon_rounds: horizon,
            seed: 1,
        };
        let positions = (0..horizon).flat_map(|_| points.iter().map(|&p| Point::from(p))).collect();
        MobilityProfile::from_parts(FieldConfig::default(), mob, (0..n).collect(), positions).unwrap()
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.as_str().parse::<Policy>().unwrap(), p);
        }
        assert!("both".parse::<Policy>().is_err());
    }

    #[test]
    fn static_topology_single_epoch_both_policies() {
        let prof = static_profile(&[(10.0, 10.0), (20.0, 10.0), (30.0, 15.0), (30.0, 30.0)], 40);
        for policy in Policy::ALL {
            let mut st = GathererState::new(policy, PositionHorizon::new(&prof, 25.0));
            let mut rng = SimRng::new(3, Stream::Leader);
            let live: Vec<NodeId> = (0..4).collect();
            let tree = st.next_tree(0, &live, &mut rng).unwrap().clone();
            if policy == Policy::MaxStability {
                assert_eq!(tree.epoch_end, Some(39));
            }
            for r in 0..40 {
                assert!(st.current_valid(r, prof.round_positions(r), |_| true));
            }
            assert_eq!(st.discovery_count(), 1);
            assert!(!st.current_valid(5, prof.round_positions(5), |n| n != 2));
        }
    }

    #[test]
    fn stretched_or_dead_invalidates() {
        let prof = static_profile(&[(0.0, 0.0), (25.0, 0.0)], 2);
        let mut rng = SimRng::new(0, Stream::Leader);
        let tree = mst_dg_next_tree(prof.round_positions(0), 0, &[0, 1], 25.0, &mut rng).unwrap();
        assert!(tree_valid(&tree, prof.round_positions(0), |_| true, 25.0));
        let stretched = [Point::new(0.0, 0.0), Point::new(25.1, 0.0)];
        assert!(!tree_valid(&tree, &stretched, |_| true, 25.0));
        assert!(!tree_valid(&tree, prof.round_positions(0), |n| n == 0, 25.0));
    }

    #[test]
    fn disconnected_live_graph_gives_no_tree() {
        let prof = static_profile(&[(0.0, 0.0), (90.0, 90.0)], 3);
        let mut rng = SimRng::new(0, Stream::Leader);
        assert!(mst_dg_next_tree(prof.round_positions(0), 0, &[0, 1], 25.0, &mut rng).is_none());
        let h = PositionHorizon::new(&prof, 25.0);
        assert!(max_stability_next_tree(&h, 0, &[0, 1], &mut rng).is_none());
        assert!(mst_dg_next_tree(prof.round_positions(0), 0, &[], 25.0, &mut rng).is_none());
    }

    #[test]
    fn leader_choice_is_seeded() {
        let mob = MobilityConfig {
            node_count: 15,
            static_count: 0,
            v_max: 3.0,
            round_period: 0.25,
            horizon_rounds: 30,
            seed: 4,
        };
        let prof = generate_profile(FieldConfig::default(), mob).unwrap();
        let live: Vec<NodeId> = (0..15).collect();
        let run = |seed| {
            let h = PositionHorizon::new(&prof, 60.0);
            let mut rng = SimRng::new(seed, Stream::Leader);
            (0..10)
                .filter_map(|r| max_stability_next_tree(&h, r, &live, &mut rng).map(|t| t.leader()))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(8), run(8));
        assert_eq!(run(8).len(), 10);
    }

    #[test]
    fn retire_records_truncated_end() {
        let prof = static_profile(&[(10.0, 10.0), (20.0, 10.0)], 50);
        let mut st = GathererState::new(Policy::MaxStability, PositionHorizon::new(&prof, 25.0));
        let mut rng = SimRng::new(1, Stream::Leader);
        st.next_tree(0, &[0, 1], &mut rng);
        st.retire(7);
        st.next_tree(7, &[0, 1], &mut rng);
        st.retire(7);
        st.next_tree(7, &[0, 1], &mut rng);
        st.finish(21);
        let spans: Vec<_> = st.epochs().iter().map(|e| (e.start, e.stop)).collect();
        assert_eq!(spans, vec![(0, Some(7)), (7, Some(7)), (7, Some(21))]);
        assert_eq!(st.discovery_count(), 3);
    }
}
