use crate::geom::{within_range, NodeId, Point};

/// Union-find over an arbitrary id set, with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    slot: Vec<usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

const ABSENT: usize = usize::MAX;

impl DisjointSet {
    pub fn for_nodes(nodes: &[NodeId]) -> Self {
        let max = nodes.iter().copied().max().map_or(0, |m| m + 1);
        let mut slot = vec![ABSENT; max];
        for (i, &n) in nodes.iter().enumerate() {
            slot[n] = i;
        }
        DisjointSet {
            slot,
            parent: (0..nodes.len()).collect(),
            size: vec![1; nodes.len()],
            components: nodes.len(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Returns true if `a` and `b` were in different components.
    /// Ids outside the set are ignored.
    pub fn union(&mut self, a: NodeId, b: NodeId) -> bool {
        let (Some(&sa), Some(&sb)) = (self.slot.get(a), self.slot.get(b)) else {
            return false;
        };
        if sa == ABSENT || sb == ABSENT {
            return false;
        }
        let (mut ra, mut rb) = (self.find(sa), self.find(sb));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn component_count(&self) -> usize {
        self.components
    }
}

/// Whether the unit-disk graph over `nodes` is a single component.
/// Empty and singleton sets are connected.
pub fn is_connected(nodes: &[NodeId], positions: &[Point], tx_range: f64) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    // Frontier search; `pending` holds nodes not yet reached.
    let mut pending: Vec<NodeId> = nodes.to_vec();
    let mut frontier = vec![pending.swap_remove(0)];
    while let Some(cur) = frontier.pop() {
        let p = positions[cur];
        let mut i = 0;
        while i < pending.len() {
            if within_range(p, positions[pending[i]], tx_range) {
                frontier.push(pending.swap_remove(i));
            } else {
                i += 1;
            }
        }
        if pending.is_empty() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        let pos = [Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(60.0, 0.0)];
        assert!(is_connected(&[0, 1], &pos, 25.0));
        assert!(!is_connected(&[0, 2], &pos, 25.0));
        assert!(is_connected(&[], &pos, 25.0));
        assert!(is_connected(&[2], &pos, 25.0));
    }

    #[test]
    fn chain_relays() {
        let pos: Vec<Point> = (0..6).map(|i| Point::new(20.0 * i as f64, 0.0)).collect();
        let all: Vec<NodeId> = (0..6).collect();
        assert!(is_connected(&all, &pos, 20.0));
        assert!(!is_connected(&[0, 1, 3, 4, 5], &pos, 20.0));
    }

    #[test]
    fn disjoint_set_counts() {
        let mut ds = DisjointSet::for_nodes(&[2, 5, 9]);
        assert_eq!(ds.component_count(), 3);
        assert!(ds.union(2, 9));
        assert!(!ds.union(9, 2));
        assert!(!ds.union(2, 4));
        assert_eq!(ds.component_count(), 2);
    }
}
