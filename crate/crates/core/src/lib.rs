//! Deterministic round-based simulator for data gathering in mobile
//! sensor networks.
//!
//! Nodes move under a seeded Random Waypoint model inside a rectangular
//! field. Each round every live node sends one packet up a leader-rooted
//! spanning tree, and the leader forwards the aggregate to a distant sink.
//! Two tree policies are compared on identical mobility:
//!
//! * [`Policy::MaxStability`] looks ahead along the mobility profile and
//!   keeps one tree for the longest run of rounds over which it stays valid.
//! * [`Policy::MstDg`] builds a minimum spanning tree of the current
//!   topology and rebuilds it whenever an edge breaks.
//!
//! Everything that uses randomness takes an explicit seed, so a run is a
//! pure function of its [`SimConfig`] and [`MobilityProfile`].

pub mod energy;
pub mod engine;
pub mod error;
pub mod gatherers;
pub mod geom;
pub mod metrics;
pub mod mobility;
pub mod rng;
pub mod topology;

pub use energy::{EnergyConfig, EnergyLedger};
pub use engine::{run_grid, run_pairwise, run_simulation, ExperimentGrid, SimConfig};
pub use error::{Error, Result};
pub use gatherers::Policy;
pub use geom::{NodeId, Point, Round};
pub use metrics::RunResult;
pub use mobility::{generate_profile, FieldConfig, MobilityConfig, MobilityProfile};
