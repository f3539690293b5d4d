use std::collections::VecDeque;

use super::SpanningTree;
use crate::error::{Error, Result};
use crate::geom::NodeId;

const NONE: usize = usize::MAX;

/// A spanning tree oriented away from its leader.
///
/// Per-node data lives in vectors indexed by node id. A node's children
/// were enqueued together, so they form one contiguous run of `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    leader: NodeId,
    order: Vec<NodeId>,
    parent: Vec<NodeId>,
    depth: Vec<usize>,
    kids: Vec<(usize, usize)>,
}

impl RootedTree {
    pub fn leader(&self) -> NodeId {
        self.leader
    }

    /// Nodes in BFS order, leader first.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(node).copied().filter(|&p| p != NONE)
    }

    /// Ascending ids; empty for leaves and for nodes outside the tree.
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        match self.kids.get(node) {
            Some(&(start, len)) => &self.order[start..start + len],
            None => &[],
        }
    }

    pub fn depth(&self, node: NodeId) -> Option<usize> {
        self.depth.get(node).copied().filter(|&d| d != NONE)
    }

    pub fn height(&self) -> usize {
        self.order.iter().map(|&n| self.depth[n]).max().unwrap_or(0)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.depth(node).is_some()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `(child, parent)` links in BFS order of the child.
    pub fn links(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.order[1..].iter().map(|&c| (c, self.parent[c]))
    }
}

/// Orients `tree` by breadth-first search from `root`, visiting neighbours
/// in ascending id order.
pub fn bfs_root(tree: &SpanningTree, root: NodeId) -> Result<RootedTree> {
    if !tree.contains(root) {
        return Err(Error::Usage(format!("root {root} is not a node of the tree")));
    }
    let nodes = tree.nodes();
    let size = nodes.last().map_or(0, |&n| n + 1);

    // adjacency in compressed rows, each row sorted
    let mut offset = vec![0usize; size + 1];
    for e in tree.edges() {
        offset[e.u + 1] += 1;
        offset[e.v + 1] += 1;
    }
    for i in 0..size {
        offset[i + 1] += offset[i];
    }
    let mut fill = offset.clone();
    let mut adj = vec![0; offset[size]];
    for e in tree.edges() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            adj[fill[a]] = b;
            fill[a] += 1;
        }
    }
    for i in 0..size {
        adj[offset[i]..offset[i + 1]].sort_unstable();
    }

    let mut order = Vec::with_capacity(nodes.len());
    let mut parent = vec![NONE; size];
    let mut depth = vec![NONE; size];
    let mut kids = vec![(0, 0); size];
    let mut queue = VecDeque::from([root]);
    depth[root] = 0;
    let mut enqueued = 1;
    while let Some(cur) = queue.pop_front() {
        order.push(cur);
        let start = enqueued;
        for &next in &adj[offset[cur]..offset[cur + 1]] {
            if depth[next] != NONE {
                continue;
            }
            depth[next] = depth[cur] + 1;
            parent[next] = cur;
            queue.push_back(next);
            enqueued += 1;
        }
        kids[cur] = (start, enqueued - start);
    }
    if order.len() != nodes.len() {
        return Err(Error::Usage("spanning tree is not connected".into()));
    }
    Ok(RootedTree {
        leader: root,
        order,
        parent,
        depth,
        kids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Edge;

    fn tree(nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> SpanningTree {
        SpanningTree::from_parts(nodes.to_vec(), edges.iter().map(|&(u, v)| Edge::new(u, v, 1.0)).collect())
    }

    #[test]
    fn path_from_end() {
        let r = bfs_root(&tree(&[0, 1, 2], &[(0, 1), (1, 2)]), 0).unwrap();
        assert_eq!(r.parent(1), Some(0));
        assert_eq!(r.parent(2), Some(1));
        assert_eq!(r.parent(0), None);
        assert_eq!(r.depth(2), Some(2));
    }

    #[test]
    fn single_node() {
        let r = bfs_root(&tree(&[4], &[]), 4).unwrap();
        assert_eq!(r.leader(), 4);
        assert_eq!(r.links().count(), 0);
        assert!(r.children(4).is_empty());
    }

    #[test]
    fn star_from_centre() {
        let r = bfs_root(&tree(&[0, 1, 2, 3], &[(2, 0), (2, 3), (2, 1)]), 2).unwrap();
        assert_eq!(r.children(2), &[0, 1, 3]);
        assert!([0, 1, 3].iter().all(|&n| r.depth(n) == Some(1)));
        assert_eq!(r.order(), &[2, 0, 1, 3]);
        assert_eq!(r.height(), 1);
    }

    #[test]
    fn unknown_root() {
        assert!(matches!(bfs_root(&tree(&[0, 1], &[(0, 1)]), 7), Err(Error::Usage(_))));
    }
}
