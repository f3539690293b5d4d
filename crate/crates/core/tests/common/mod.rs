//! Independent reference implementations and invariant checks shared by the
//! integration test targets. Nothing here calls the library's graph code.

#![allow(dead_code)]

use dgsim_core::energy::EnergyLedger;
use dgsim_core::engine::{run_detailed, RoundObserver, RunOutput, SimConfig};
use dgsim_core::geom::{Point, Round};
use dgsim_core::mobility::MobilityProfile;

pub fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

/// Search-based connectivity over `nodes`, linking pairs with `link(a, b)`.
pub fn connected_by(nodes: &[usize], link: impl Fn(usize, usize) -> bool) -> bool {
    if nodes.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for j in 0..nodes.len() {
            if !seen[j] && link(nodes[i], nodes[j]) {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == nodes.len()
}

pub fn unit_disk_connected(nodes: &[usize], positions: &[Point], range: f64) -> bool {
    connected_by(nodes, |a, b| dist(positions[a], positions[b]) <= range)
}

/// Connectivity of the intersection of the snapshots for rounds `from..=to`,
/// rebuilt from positions.
pub fn intersection_connected(profile: &MobilityProfile, nodes: &[usize], from: Round, to: Round, range: f64) -> bool {
    connected_by(nodes, |a, b| {
        (from..=to).all(|r| {
            let p = profile.round_positions(r);
            dist(p[a], p[b]) <= range
        })
    })
}

/// Minimum spanning-tree weight by exhaustive enumeration of acyclic edge
/// subsets of size `n - 1`. `None` if no spanning tree exists.
pub fn brute_force_mst_weight(n: usize, edges: &[(usize, usize, f64)]) -> Option<f64> {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        r
    }
    fn go(
        n: usize,
        edges: &[(usize, usize, f64)],
        from: usize,
        parent: &mut Vec<usize>,
        picked: usize,
        weight: f64,
        best: &mut Option<f64>,
    ) {
        if picked == n - 1 {
            if best.is_none_or(|b| weight < b) {
                *best = Some(weight);
            }
            return;
        }
        if edges.len() - from < n - 1 - picked {
            return;
        }
        for k in from..edges.len() {
            let (u, v, w) = edges[k];
            let (ru, rv) = (find(parent, u), find(parent, v));
            if ru == rv {
                continue;
            }
            let saved = parent.clone();
            parent[ru] = rv;
            go(n, edges, k + 1, parent, picked + 1, weight + w, best);
            *parent = saved;
        }
    }
    if n <= 1 {
        return Some(0.0);
    }
    let mut best = None;
    go(n, edges, 0, &mut (0..n).collect(), 0, 0.0, &mut best);
    best
}

/// Every round's residual energies and live set.
#[derive(Default)]
pub struct Recorder {
    pub residuals: Vec<Vec<f64>>,
    pub live: Vec<Vec<usize>>,
    pub times: Vec<f64>,
}

impl RoundObserver for Recorder {
    fn on_round(&mut self, _round: Round, time_s: f64, ledger: &EnergyLedger) {
        self.residuals.push(ledger.residuals().to_vec());
        self.live.push(ledger.live_nodes());
        self.times.push(time_s);
    }
}

pub fn run_recorded(cfg: &SimConfig, profile: &MobilityProfile) -> (RunOutput, Recorder) {
    let mut rec = Recorder::default();
    let out = run_detailed(cfg, profile, &mut rec).expect("run succeeds");
    (out, rec)
}

/// Checks the run-level invariants; returns a description of the first
/// violation.
pub fn check_run_invariants(
    cfg: &SimConfig,
    profile: &MobilityProfile,
    out: &RunOutput,
    rec: &Recorder,
) -> Result<(), String> {
    let r = &out.result;
    let n = profile.node_count();
    let all: Vec<usize> = (0..n).collect();
    let rounds = out.rounds_simulated;
    if rec.residuals.len() != rounds {
        return Err(format!("observer saw {} rounds, run reports {rounds}", rec.residuals.len()));
    }

    // energy never increases and never goes negative
    let initial = if cfg.sufficient_energy { f64::INFINITY } else { cfg.energy.initial_energy };
    let mut prev = vec![initial; n];
    for (round, row) in rec.residuals.iter().enumerate() {
        for (node, (&now, &before)) in row.iter().zip(&prev).enumerate() {
            if now > before || now < 0.0 {
                return Err(format!("node {node} residual {before} -> {now} at round {round}"));
            }
        }
        prev.clone_from(row);
    }

    // failure times ordered, one per dead node, consistent with the live sets
    if r.failure_times_s.windows(2).any(|w| w[0] > w[1]) {
        return Err(format!("failure times out of order: {:?}", r.failure_times_s));
    }
    let dead_at_end = rec.live.last().map_or(0, |l| n - l.len());
    if r.failure_times_s.len() != dead_at_end {
        return Err(format!("{} failure times but {dead_at_end} dead nodes", r.failure_times_s.len()));
    }
    if r.node_lifetime_s != r.failure_times_s.first().copied() {
        return Err("node lifetime is not the first failure time".into());
    }
    for (round, live) in rec.live.iter().enumerate() {
        let t = rec.times[round];
        let dead = r.failure_times_s.iter().filter(|&&f| f <= t).count();
        if live.len() + dead != n {
            return Err(format!("round {round}: {} live but {dead} failures by then", live.len()));
        }
    }

    // network lifetime: first round with live disconnected and all connected
    let tx = cfg.tx_range;
    let holds = |round: usize| {
        let pos = profile.round_positions(round);
        !unit_disk_connected(&rec.live[round], pos, tx) && unit_disk_connected(&all, pos, tx)
    };
    let first = (0..rounds).find(|&round| holds(round));
    match (first, r.network_lifetime_s) {
        (Some(round), Some(t)) if rec.times[round] == t && round + 1 == rounds => {}
        (None, None) => {}
        (f, t) => return Err(format!("network lifetime {t:?} but condition first holds at round {f:?}")),
    }

    // epochs: ordered, disjoint, inside the run, disjoint from skipped rounds
    let mut cursor = 0;
    for e in &out.epochs {
        let stop = e.stop.unwrap_or(rounds);
        if e.start < cursor || stop < e.start || stop > rounds {
            return Err(format!("epoch [{}, {stop}) overlaps or leaves [0, {rounds})", e.start));
        }
        cursor = stop;
        if out.no_tree_rounds.iter().any(|&k| k >= e.start && k < stop) {
            return Err(format!("skipped round inside epoch [{}, {stop})", e.start));
        }
    }
    // every round is in an epoch or skipped, except rounds whose failures
    // cut an epoch short and found no replacement
    for round in 0..rounds {
        let in_epoch = out.epochs.iter().any(|e| e.start <= round && round < e.stop.unwrap_or(rounds));
        let skipped = out.no_tree_rounds.contains(&round);
        let cut = r.failure_times_s.contains(&rec.times[round]);
        if !in_epoch && !skipped && !cut {
            return Err(format!("round {round} is neither gathered nor skipped"));
        }
    }
    if r.discovery_count != out.epochs.len() {
        return Err(format!("{} discoveries but {} epochs", r.discovery_count, out.epochs.len()));
    }

    // coverage-loss curve: first-hit times non-decreasing in the target
    if r.coverage_loss.times().windows(2).any(|w| w[0] > w[1]) {
        return Err("coverage-loss times decrease with the target".into());
    }
    Ok(())
}

/// Speed bound, field containment and static immobility, checked directly.
pub fn check_profile_invariants(profile: &MobilityProfile) -> Result<(), String> {
    let f = profile.field();
    let m = profile.mobility();
    let step = m.v_max * m.round_period + 1e-9;
    if profile.static_set().len() != m.static_count {
        return Err(format!("{} static nodes, expected {}", profile.static_set().len(), m.static_count));
    }
    for round in 0..profile.horizon() {
        let pos = profile.round_positions(round);
        for (node, p) in pos.iter().enumerate() {
            if !(0.0..=f.width).contains(&p.x) || !(0.0..=f.height).contains(&p.y) {
                return Err(format!("node {node} outside the field at round {round}: {p:?}"));
            }
            if round > 0 {
                let d = dist(profile.round_positions(round - 1)[node], *p);
                if d > step {
                    return Err(format!("node {node} moved {d} m in round {round}"));
                }
                if profile.is_static(node) && d != 0.0 {
                    return Err(format!("static node {node} moved at round {round}"));
                }
            }
        }
    }
    Ok(())
}
