use serde::{Deserialize, Serialize};

use crate::energy::EnergyConfig;
use crate::error::{Error, Result};
use crate::gatherers::Policy;
use crate::mobility::{FieldConfig, MobilityConfig, MobilityProfile};
use crate::rng::derive_seed;

/// Everything one run needs besides the mobility profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub field: FieldConfig,
    pub mobility: MobilityConfig,
    pub energy: EnergyConfig,
    pub tx_range: f64,
    /// Defaults to half the transmission range.
    pub sensing_range: Option<f64>,
    pub policy: Policy,
    pub run_seed: u64,
    /// Unlimited batteries: no node ever fails.
    pub sufficient_energy: bool,
    /// Draw the coverage probes once per run instead of every round.
    pub fixed_probes: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            field: FieldConfig::default(),
            mobility: MobilityConfig::default(),
            energy: EnergyConfig::default(),
            tx_range: 25.0,
            sensing_range: None,
            policy: Policy::MaxStability,
            run_seed: 0,
            sufficient_energy: false,
            fixed_probes: false,
        }
    }
}

impl SimConfig {
    pub fn sensing_range(&self) -> f64 {
        self.sensing_range.unwrap_or(self.tx_range / 2.0)
    }

    pub fn initial_energy(&self) -> f64 {
        if self.sufficient_energy {
            f64::INFINITY
        } else {
            self.energy.initial_energy
        }
    }

    pub fn horizon_rounds(&self) -> usize {
        self.mobility.horizon_rounds
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.mobility.validate()?;
        self.energy.validate()?;
        if !(self.tx_range.is_finite() && self.tx_range > 0.0) {
            return Err(Error::config("tx_range", format!("must be > 0, got {}", self.tx_range)));
        }
        if let Some(s) = self.sensing_range {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::config("sensing_range", "must be > 0"));
            }
            if self.tx_range < 2.0 * s {
                return Err(Error::config(
                    "sensing_range",
                    format!("{s} exceeds half the transmission range {}", self.tx_range),
                ));
            }
        }
        Ok(())
    }

    /// Checks that `profile` can drive this configuration.
    pub fn check_profile(&self, profile: &MobilityProfile) -> Result<()> {
        if profile.field() != &self.field {
            return Err(Error::Usage("profile field differs from the configured field".into()));
        }
        if profile.node_count() != self.mobility.node_count {
            return Err(Error::Usage(format!(
                "profile has {} nodes, configuration expects {}",
                profile.node_count(),
                self.mobility.node_count
            )));
        }
        if profile.mobility().round_period != self.mobility.round_period {
            return Err(Error::Usage("profile round period differs from the configuration".into()));
        }
        if profile.horizon() < self.horizon_rounds() {
            return Err(Error::Usage(format!(
                "profile covers {} rounds, configuration needs {}",
                profile.horizon(),
                self.horizon_rounds()
            )));
        }
        Ok(())
    }
}

/// One operating point of the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub tx_range: f64,
    pub v_max: f64,
    pub static_count: usize,
}

impl Cell {
    /// Seed of the `index`-th profile for this cell's mobility setting.
    /// Depends on the cell's values, never on its position in a grid, and
    /// not on the transmission range: both ranges replay the same profiles.
    pub fn profile_seed(&self, base_seed: u64, index: usize) -> u64 {
        derive_seed(base_seed, &[self.v_max.to_bits(), self.static_count as u64, index as u64])
    }

    pub fn run_seed(&self, base_seed: u64, index: usize) -> u64 {
        derive_seed(self.profile_seed(base_seed, index), &[self.tx_range.to_bits()])
    }

    /// Short stable label, e.g. `tx25-v3-s0`.
    pub fn label(&self) -> String {
        format!("tx{}-v{}-s{}", self.tx_range, self.v_max, self.static_count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub tx_ranges: Vec<f64>,
    pub v_max: Vec<f64>,
    pub static_counts: Vec<usize>,
    pub profiles_per_cell: usize,
    pub base_seed: u64,
    /// Template for every run: field, energy, node count, horizon and
    /// energy mode. Its tx range, speed, static count, policy and seeds are
    /// overwritten per run.
    pub base: SimConfig,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            tx_ranges: vec![25.0, 40.0],
            v_max: vec![3.0, 10.0, 20.0],
            static_counts: vec![0, 20, 50, 80],
            profiles_per_cell: 20,
            base_seed: 0,
            base: SimConfig::default(),
        }
    }
}

impl ExperimentGrid {
    /// Cross product in `tx_range`, then `v_max`, then `static_count` order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &tx_range in &self.tx_ranges {
            for &v_max in &self.v_max {
                for &static_count in &self.static_counts {
                    out.push(Cell {
                        tx_range,
                        v_max,
                        static_count,
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.tx_ranges.is_empty() || self.v_max.is_empty() || self.static_counts.is_empty() {
            return Err(Error::config("grid", "every axis needs at least one value"));
        }
        if self.profiles_per_cell == 0 {
            return Err(Error::config("profiles_per_cell", "must be >= 1"));
        }
        for cell in self.cells() {
            self.config_for(&cell, Policy::MaxStability, 0).validate()?;
        }
        Ok(())
    }

    pub fn mobility_for(&self, cell: &Cell, index: usize) -> MobilityConfig {
        MobilityConfig {
            v_max: cell.v_max,
            static_count: cell.static_count,
            seed: cell.profile_seed(self.base_seed, index),
            ..self.base.mobility
        }
    }

    pub fn config_for(&self, cell: &Cell, policy: Policy, index: usize) -> SimConfig {
        SimConfig {
            mobility: self.mobility_for(cell, index),
            tx_range: cell.tx_range,
            policy,
            run_seed: cell.run_seed(self.base_seed, index),
            ..self.base.clone()
        }
    }
}
