//! Unit-disk snapshots, their round-by-round intersections, and the tree
//! kernels run over them.

mod bfs;
mod connectivity;
mod dump;
mod mobile;
mod prim;
mod static_graph;

pub use bfs::{bfs_root, RootedTree};
pub use connectivity::{is_connected, DisjointSet};
pub use dump::{dump_edge_list, parse_edge_list};
pub use mobile::MobileGraph;
pub use prim::{prim_mst, Disconnected, SpanningTree};
pub use static_graph::{build_static_graph, StaticGraph};

use crate::geom::NodeId;

/// Undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, weight: f64) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { u, v, weight }
    }

    pub fn key(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }
}

/// Read access shared by static and mobile graphs.
pub trait WeightedGraph {
    /// Sorted node ids.
    fn node_ids(&self) -> &[NodeId];

    /// Edges in ascending `(u, v)` order.
    fn edges(&self) -> Vec<Edge>;

    fn edge_count(&self) -> usize;

    /// Same sequence as [`Self::edges`] without collecting it.
    fn for_each_edge(&self, f: &mut dyn FnMut(Edge)) {
        self.edges().into_iter().for_each(f);
    }

    /// One component over [`Self::node_ids`]; empty and singleton graphs count as connected.
    fn is_connected(&self) -> bool {
        let nodes = self.node_ids();
        if nodes.len() <= 1 {
            return true;
        }
        let mut ds = DisjointSet::for_nodes(nodes);
        self.for_each_edge(&mut |e| {
            ds.union(e.u, e.v);
        });
        ds.component_count() == 1
    }
}
