//! Edge-list text dump for golden tests.
//!
//! ```text
//! # dgsim-graph v1 kind=<static|mobile> start=<round> end=<round>
//! # nodes <id> <id> ...
//! <u> <v> <weight>
//! ```

use super::{Edge, MobileGraph, StaticGraph, WeightedGraph};
use crate::error::{Error, Result};
use crate::geom::NodeId;

pub trait Dumpable: WeightedGraph {
    fn header(&self) -> String;
}

impl Dumpable for StaticGraph {
    fn header(&self) -> String {
        format!("# dgsim-graph v1 kind=static start={0} end={0}", self.round)
    }
}

impl Dumpable for MobileGraph {
    fn header(&self) -> String {
        format!(
            "# dgsim-graph v1 kind=mobile start={} end={}",
            self.start_round(),
            self.end_round()
        )
    }
}

pub fn dump_edge_list<G: Dumpable>(g: &G) -> String {
    let mut out = g.header();
    out.push_str("\n# nodes");
    for n in g.node_ids() {
        out.push_str(&format!(" {n}"));
    }
    out.push('\n');
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
    }
    out
}

/// Reads back the node set and edges of a dump.
pub fn parse_edge_list(text: &str) -> Result<(Vec<NodeId>, Vec<Edge>)> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let bad = |msg: &str| Error::Parse {
            location: format!("line {}", lineno + 1),
            message: msg.to_string(),
        };
        if let Some(rest) = line.strip_prefix("# nodes") {
            for tok in rest.split_whitespace() {
                nodes.push(tok.parse().map_err(|_| bad("bad node id"))?);
            }
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(u), Some(v), Some(w), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(bad("expected `u v weight`"));
        };
        edges.push(Edge::new(
            u.parse().map_err(|_| bad("bad endpoint"))?,
            v.parse().map_err(|_| bad("bad endpoint"))?,
            w.parse().map_err(|_| bad("bad weight"))?,
        ));
    }
    Ok((nodes, edges))
}
