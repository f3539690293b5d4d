use std::cmp::Ordering;

use super::{Edge, WeightedGraph};
use crate::geom::NodeId;

/// Returned by [`prim_mst`] when the graph has more than one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disconnected;

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Wraps a known tree. Callers guarantee acyclicity and connectivity.
    pub fn from_parts(mut nodes: Vec<NodeId>, edges: Vec<Edge>) -> Self {
        nodes.sort_unstable();
        SpanningTree { nodes, edges }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// In the order Prim added them.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }
}

/// Heap key: weight, then smaller endpoint, then larger endpoint.
#[derive(Debug, Clone, Copy)]
struct Frontier {
    weight: f64,
    lo: NodeId,
    hi: NodeId,
    to: usize,
}

impl Frontier {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
    }
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Equal
    }
}
impl Eq for Frontier {}
impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_key(other)
    }
}

/// Minimum-weight spanning tree by Prim, grown from the smallest id.
///
/// Among frontier edges of equal weight the one with the smallest
/// `(min endpoint, max endpoint)` wins, so the tree is a pure function of
/// the graph.
pub fn prim_mst<G: WeightedGraph + ?Sized>(g: &G) -> Result<SpanningTree, Disconnected> {
    let nodes = g.node_ids();
    if nodes.is_empty() {
        return Ok(SpanningTree::from_parts(Vec::new(), Vec::new()));
    }
    let size = nodes[nodes.len() - 1] + 1;
    let mut index = vec![usize::MAX; size];
    for (i, &n) in nodes.iter().enumerate() {
        index[n] = i;
    }
    let slot = |id: NodeId| index.get(id).copied().filter(|&i| i != usize::MAX);
    let mut pairs = Vec::with_capacity(g.edge_count());
    g.for_each_edge(&mut |e| {
        if let (Some(a), Some(b)) = (slot(e.u), slot(e.v)) {
            pairs.push((a, b, e.weight));
        }
    });
    // compressed adjacency rows
    let mut offset = vec![0usize; nodes.len() + 1];
    for &(a, b, _) in &pairs {
        offset[a + 1] += 1;
        offset[b + 1] += 1;
    }
    for i in 0..nodes.len() {
        offset[i + 1] += offset[i];
    }
    let mut fill = offset.clone();
    let mut adj = vec![(0usize, 0.0f64); offset[nodes.len()]];
    for &(a, b, w) in &pairs {
        adj[fill[a]] = (b, w);
        fill[a] += 1;
        adj[fill[b]] = (a, w);
        fill[b] += 1;
    }

    // best[j]: cheapest known edge from the tree to j. The global minimum
    // over best[] is the minimum frontier edge under the same key order.
    let mut in_tree = vec![false; nodes.len()];
    let mut best: Vec<Option<Frontier>> = vec![None; nodes.len()];
    let mut frontier: Vec<usize> = Vec::new();
    let mut edges = Vec::with_capacity(nodes.len() - 1);
    let mut cur = 0;
    loop {
        in_tree[cur] = true;
        for &(j, w) in &adj[offset[cur]..offset[cur + 1]] {
            if in_tree[j] {
                continue;
            }
            let (lo, hi) = if nodes[cur] < nodes[j] { (nodes[cur], nodes[j]) } else { (nodes[j], nodes[cur]) };
            let cand = Frontier { weight: w, lo, hi, to: j };
            match best[j] {
                None => {
                    best[j] = Some(cand);
                    frontier.push(j);
                }
                Some(b) if cand < b => best[j] = Some(cand),
                Some(_) => {}
            }
        }
        let Some((pos, f)) = frontier
            .iter()
            .enumerate()
            .map(|(pos, &j)| (pos, best[j].expect("frontier entries have a best edge")))
            .min_by(|a, b| a.1.cmp(&b.1))
        else {
            break;
        };
        frontier.swap_remove(pos);
        edges.push(Edge {
            u: f.lo,
            v: f.hi,
            weight: f.weight,
        });
        cur = f.to;
    }
    if edges.len() + 1 == nodes.len() {
        Ok(SpanningTree::from_parts(nodes.to_vec(), edges))
    } else {
        Err(Disconnected)
    }
}
