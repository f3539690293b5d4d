//! Tree-sequence trace: one line per constructed tree.
//!
//! ```text
//! # dgsim-trees v1
//! <policy> <start> <stop|open> <leader> <u>-<v> <u>-<v> ...
//! ```
//!
//! `start..stop` is the half-open round range the tree's epoch covers.

use serde::{Deserialize, Serialize};

use super::{DgTree, Policy};
use crate::error::{Error, Result};
use crate::geom::{NodeId, Round};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub policy: Policy,
    pub start: Round,
    /// Exclusive; `None` while the tree is still in use.
    pub stop: Option<Round>,
    pub leader: NodeId,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl EpochRecord {
    pub(crate) fn open(policy: Policy, tree: &DgTree) -> Self {
        let mut edges: Vec<_> = tree.spanning.edges().iter().map(|e| e.key()).collect();
        edges.sort_unstable();
        EpochRecord {
            policy,
            start: tree.epoch_start,
            stop: tree.epoch_end.map(|e| e + 1),
            leader: tree.leader(),
            edges,
        }
    }

    /// Rounds covered, `0` for an epoch truncated before it began.
    pub fn len(&self) -> Option<usize> {
        self.stop.map(|s| s.saturating_sub(self.start))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

pub fn format_tree_trace(records: &[EpochRecord]) -> String {
    let mut out = String::from("# dgsim-trees v1\n");
    for r in records {
        let stop = r.stop.map_or_else(|| "open".to_string(), |s| s.to_string());
        out.push_str(&format!("{} {} {} {}", r.policy, r.start, stop, r.leader));
        for (u, v) in &r.edges {
            out.push_str(&format!(" {u}-{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_tree_trace(text: &str) -> Result<Vec<EpochRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse {
            location: format!("line {}", i + 1),
            message: msg,
        };
        let mut toks = line.split_whitespace();
        let mut next = |what: &str| toks.next().ok_or_else(|| bad(format!("missing {what}")));
        let policy: Policy = next("policy")?.parse().map_err(bad)?;
        let start = next("start")?.parse().map_err(|_| bad("bad start".into()))?;
        let stop = match next("stop")? {
            "open" => None,
            s => Some(s.parse().map_err(|_| bad("bad stop".into()))?),
        };
        let leader = next("leader")?.parse().map_err(|_| bad("bad leader".into()))?;
        let edges = toks
            .map(|t| {
                let (u, v) = t.split_once('-').ok_or_else(|| bad(format!("bad edge `{t}`")))?;
                Ok((
                    u.parse().map_err(|_| bad(format!("bad edge `{t}`")))?,
                    v.parse().map_err(|_| bad(format!("bad edge `{t}`")))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(EpochRecord {
            policy,
            start,
            stop,
            leader,
            edges,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_trace() {
        let recs = vec![
            EpochRecord {
                policy: Policy::MaxStability,
                start: 0,
                stop: Some(12),
                leader: 2,
                edges: vec![(0, 2), (1, 2)],
            },
            EpochRecord {
                policy: Policy::MstDg,
                start: 12,
                stop: None,
                leader: 0,
                edges: vec![],
            },
        ];
        let text = format_tree_trace(&recs);
        assert_eq!(text, "# dgsim-trees v1\nmax-stability 0 12 2 0-2 1-2\nmst-dg 12 open 0\n");
        assert_eq!(parse_tree_trace(&text).unwrap(), recs);
        assert!(parse_tree_trace("max-stability 0\n").is_err());
    }
}
