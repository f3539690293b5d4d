//! First-order radio model and per-node energy bookkeeping.
//!
//! Transmitting `k` bits over `d` metres costs `e_elec*k + eps_amp*k*d^2`,
//! receiving costs `e_elec*k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{within_range, NodeId, Point};
use crate::topology::RootedTree;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyConfig {
    /// J/bit for transmitter or receiver electronics.
    pub e_elec: f64,
    /// J/bit/m^2 for the transmit amplifier.
    pub eps_amp: f64,
    /// Joules per node at start. `f64::INFINITY` disables failures.
    pub initial_energy: f64,
    pub data_packet_bits: u64,
    pub control_packet_bits: u64,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        EnergyConfig {
            e_elec: 50e-9,
            eps_amp: 100e-12,
            initial_energy: 2.0,
            data_packet_bits: 2000,
            control_packet_bits: 400,
        }
    }
}

impl EnergyConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && !v.is_nan();
        if !(positive(self.e_elec) && self.e_elec.is_finite()) {
            return Err(Error::config("e_elec", "must be > 0"));
        }
        if !(positive(self.eps_amp) && self.eps_amp.is_finite()) {
            return Err(Error::config("eps_amp", "must be > 0"));
        }
        if !positive(self.initial_energy) {
            return Err(Error::config("initial_energy", "must be > 0"));
        }
        if self.data_packet_bits == 0 {
            return Err(Error::config("data_packet_bits", "must be > 0"));
        }
        if self.control_packet_bits == 0 {
            return Err(Error::config("control_packet_bits", "must be > 0"));
        }
        Ok(())
    }
}

pub fn tx_energy(cfg: &EnergyConfig, bits: u64, distance: f64) -> f64 {
    let k = bits as f64;
    cfg.e_elec * k + cfg.eps_amp * k * distance * distance
}

pub fn rx_energy(cfg: &EnergyConfig, bits: u64) -> f64 {
    cfg.e_elec * bits as f64
}

/// Residual energy and failure times of every node in one run.
///
/// Residuals only go down. A charge that overdraws a node clamps it at zero
/// and stamps the failure time; the node is dead from then on.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLedger {
    residual: Vec<f64>,
    consumed: Vec<f64>,
    failure_time: Vec<Option<f64>>,
    failures: Vec<(NodeId, f64)>,
}

impl EnergyLedger {
    pub fn new(node_count: usize, initial_energy: f64) -> Self {
        EnergyLedger {
            residual: vec![initial_energy; node_count],
            consumed: vec![0.0; node_count],
            failure_time: vec![None; node_count],
            failures: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.residual.len()
    }

    pub fn residual(&self, node: NodeId) -> f64 {
        self.residual[node]
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residual
    }

    /// Energy actually drawn from `node` so far.
    pub fn consumed(&self, node: NodeId) -> f64 {
        self.consumed[node]
    }

    pub fn total_consumed(&self) -> f64 {
        self.consumed.iter().sum()
    }

    pub fn is_live(&self, node: NodeId) -> bool {
        self.residual[node] > 0.0
    }

    pub fn live_nodes(&self) -> Vec<NodeId> {
        (0..self.residual.len()).filter(|&n| self.is_live(n)).collect()
    }

    pub fn failure_time(&self, node: NodeId) -> Option<f64> {
        self.failure_time[node]
    }

    /// `(node, time)` in the order failures were recorded.
    pub fn failures(&self) -> &[(NodeId, f64)] {
        &self.failures
    }

    /// Draws `joules` from `node`; returns true if this charge exhausted it.
    pub fn charge(&mut self, node: NodeId, joules: f64, time_s: f64) -> bool {
        let before = self.residual[node];
        if before <= 0.0 {
            return false;
        }
        let drawn = joules.min(before);
        self.consumed[node] += drawn;
        self.residual[node] = before - joules;
        if self.residual[node] <= 0.0 {
            self.residual[node] = 0.0;
            self.failure_time[node] = Some(time_s);
            self.failures.push((node, time_s));
            true
        } else {
            false
        }
    }
}

/// Charges one aggregation round over `tree`: every non-leader sends one data
/// packet to its parent, every node receives one packet per child, and the
/// leader sends the aggregate to the sink. Returns the nodes exhausted by it.
pub fn charge_gathering_round(
    ledger: &mut EnergyLedger,
    tree: &RootedTree,
    positions: &[Point],
    cfg: &EnergyConfig,
    sink: Point,
    time_s: f64,
) -> Vec<NodeId> {
    let bits = cfg.data_packet_bits;
    let rx = rx_energy(cfg, bits);
    let mut failed = Vec::new();
    for &node in tree.order() {
        let mut cost = rx * tree.children(node).len() as f64;
        cost += match tree.parent(node) {
            Some(p) => tx_energy(cfg, bits, positions[node].distance(positions[p])),
            None => tx_energy(cfg, bits, positions[node].distance(sink)),
        };
        if ledger.charge(node, cost, time_s) {
            failed.push(node);
        }
    }
    failed
}

/// Charges one network-wide flood of the control packet: each live node
/// broadcasts once at full range and hears every live neighbour once.
pub fn charge_discovery(
    ledger: &mut EnergyLedger,
    live: &[NodeId],
    positions: &[Point],
    cfg: &EnergyConfig,
    tx_range: f64,
    time_s: f64,
) -> Vec<NodeId> {
    let bits = cfg.control_packet_bits;
    let broadcast = tx_energy(cfg, bits, tx_range);
    let rx = rx_energy(cfg, bits);
    let costs: Vec<f64> = live
        .iter()
        .map(|&a| {
            let neighbours = live
                .iter()
                .filter(|&&b| b != a && within_range(positions[a], positions[b], tx_range))
                .count();
            broadcast + rx * neighbours as f64
        })
        .collect();
    live.iter()
        .zip(costs)
        .filter_map(|(&node, cost)| ledger.charge(node, cost, time_s).then_some(node))
        .collect()
}
