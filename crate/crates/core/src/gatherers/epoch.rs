use crate::geom::{NodeId, Point, Round};
use crate::mobility::MobilityProfile;
use crate::topology::{build_static_graph, prim_mst, MobileGraph, SpanningTree, StaticGraph, WeightedGraph};

/// Future topology as seen by the look-ahead policy.
pub trait TopologyHorizon {
    /// Number of rounds `T`; valid rounds are `0..T`.
    fn rounds(&self) -> usize;

    /// Snapshot of `round` restricted to `live`.
    fn snapshot(&self, round: Round, live: &[NodeId]) -> StaticGraph;

    /// `G(i, j+1)` from `G(i, j)`.
    fn extend(&self, window: &MobileGraph, live: &[NodeId]) -> MobileGraph {
        let next = self.snapshot(window.end_round() + 1, live);
        window.intersect_extend(&next).expect("consecutive snapshot over the same live set")
    }
}

/// Pre-built snapshots, one per round starting at round 0.
impl TopologyHorizon for [StaticGraph] {
    fn rounds(&self) -> usize {
        self.len()
    }

    fn snapshot(&self, round: Round, live: &[NodeId]) -> StaticGraph {
        self[round].restrict(live)
    }
}

/// Snapshots derived on demand from a mobility profile.
#[derive(Debug, Clone, Copy)]
pub struct PositionHorizon<'a> {
    profile: &'a MobilityProfile,
    tx_range: f64,
    rounds: usize,
}

impl<'a> PositionHorizon<'a> {
    pub fn new(profile: &'a MobilityProfile, tx_range: f64) -> Self {
        Self::with_rounds(profile, tx_range, profile.horizon())
    }

    /// Looks at most `rounds` rounds ahead of round 0 (capped at the profile).
    pub fn with_rounds(profile: &'a MobilityProfile, tx_range: f64, rounds: usize) -> Self {
        PositionHorizon {
            profile,
            tx_range,
            rounds: rounds.min(profile.horizon()),
        }
    }

    pub fn tx_range(&self) -> f64 {
        self.tx_range
    }

    pub fn positions(&self, round: Round) -> &'a [Point] {
        self.profile.round_positions(round)
    }
}

impl TopologyHorizon for PositionHorizon<'_> {
    fn rounds(&self) -> usize {
        self.rounds
    }

    fn snapshot(&self, round: Round, live: &[NodeId]) -> StaticGraph {
        build_static_graph(round, self.positions(round), live, self.tx_range)
    }

    fn extend(&self, window: &MobileGraph, _live: &[NodeId]) -> MobileGraph {
        window.extend_with_positions(self.positions(window.end_round() + 1), self.tx_range)
    }
}

/// A maximal connected window `[start, end]` and the minimum-weight tree of
/// its intersection graph.
#[derive(Debug, Clone, PartialEq)]
pub struct StableEpoch {
    pub start: Round,
    /// Inclusive.
    pub end: Round,
    pub tree: SpanningTree,
}

/// Grows `G(i, j)` one round at a time while it stays connected and stops
/// at the last connected window or the end of the horizon. `None` when
/// `G(i, i)` over `live` is already disconnected.
pub fn max_stability_find_epoch<H: TopologyHorizon + ?Sized>(horizon: &H, start: Round, live: &[NodeId]) -> Option<StableEpoch> {
    if live.is_empty() || start >= horizon.rounds() {
        return None;
    }
    let mut window = MobileGraph::from_static(&horizon.snapshot(start, live));
    if !window.is_connected() {
        return None;
    }
    while window.end_round() + 1 < horizon.rounds() {
        let next = horizon.extend(&window, live);
        // Losing no edge cannot disconnect the window.
        if next.edge_count() != window.edge_count() && !next.is_connected() {
            break;
        }
        window = next;
    }
    let tree = prim_mst(&window).expect("window checked connected");
    Some(StableEpoch {
        start,
        end: window.end_round(),
        tree,
    })
}
