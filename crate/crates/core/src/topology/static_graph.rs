use std::collections::BTreeSet;

use super::{Edge, WeightedGraph};
use crate::geom::{within_range, NodeId, Point, Round};

/// Unit-disk snapshot of the live nodes at one round, weighted by Euclidean
/// distance.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticGraph {
    pub round: Round,
    pub(crate) live: Vec<NodeId>,
    pub(crate) edges: Vec<Edge>,
}

impl StaticGraph {
    /// Builds directly from an edge list. Edges touching nodes outside
    /// `live` are dropped.
    pub fn from_edges(round: Round, live: impl IntoIterator<Item = NodeId>, edges: impl IntoIterator<Item = Edge>) -> Self {
        let live: Vec<NodeId> = live.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge::new(e.u, e.v, e.weight))
            .filter(|e| e.u != e.v && live.binary_search(&e.u).is_ok() && live.binary_search(&e.v).is_ok())
            .collect();
        edges.sort_by_key(Edge::key);
        edges.dedup_by_key(|e| e.key());
        StaticGraph { round, live, edges }
    }

    /// The same snapshot restricted to a subset of its nodes.
    pub fn restrict(&self, keep: &[NodeId]) -> StaticGraph {
        StaticGraph::from_edges(
            self.round,
            keep.iter().copied().filter(|n| self.live.binary_search(n).is_ok()),
            self.edges.iter().copied(),
        )
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let key = Edge::new(a, b, 0.0).key();
        self.edges
            .binary_search_by_key(&key, Edge::key)
            .ok()
            .map(|i| self.edges[i].weight)
    }
}

impl WeightedGraph for StaticGraph {
    fn node_ids(&self) -> &[NodeId] {
        &self.live
    }

    fn edges(&self) -> Vec<Edge> {
        self.edges.clone()
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn for_each_edge(&self, f: &mut dyn FnMut(Edge)) {
        self.edges.iter().copied().for_each(f);
    }
}

/// Links every pair of live nodes within `tx_range` (inclusive).
///
/// `positions` is indexed by node id.
pub fn build_static_graph(round: Round, positions: &[Point], live: &[NodeId], tx_range: f64) -> StaticGraph {
    let mut live = live.to_vec();
    live.sort_unstable();
    live.dedup();
    let mut edges = Vec::new();
    for (i, &a) in live.iter().enumerate() {
        for &b in &live[i + 1..] {
            if within_range(positions[a], positions[b], tx_range) {
                edges.push(Edge {
                    u: a,
                    v: b,
                    weight: positions[a].distance(positions[b]),
                });
            }
        }
    }
    StaticGraph { round, live, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_four_five() {
        let pos = [Point::new(0.0, 0.0), Point::new(3.0, 4.0)];
        let g = build_static_graph(0, &pos, &[0, 1], 25.0);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(1, 0), Some(5.0));
    }

    #[test]
    fn range_is_inclusive() {
        let pos = [Point::new(0.0, 0.0), Point::new(25.0, 0.0), Point::new(50.000001, 0.0)];
        let g = build_static_graph(0, &pos, &[0, 1, 2], 25.0);
        assert_eq!(g.weight(0, 1), Some(25.0));
        assert_eq!(g.weight(1, 2), None);
        let far = [Point::new(0.0, 0.0), Point::new(25.000001, 0.0)];
        assert_eq!(build_static_graph(0, &far, &[0, 1], 25.0).edge_count(), 0);
    }

    #[test]
    fn dead_nodes_excluded_and_empty_ok() {
        let pos = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        let g = build_static_graph(4, &pos, &[0, 2], 25.0);
        assert_eq!(g.node_ids(), &[0, 2]);
        assert_eq!(g.edges().len(), 1);
        assert!(g.weight(0, 1).is_none());
        let empty = build_static_graph(0, &pos, &[], 25.0);
        assert_eq!(empty.edge_count(), 0);
        assert!(empty.is_connected());
    }
}
