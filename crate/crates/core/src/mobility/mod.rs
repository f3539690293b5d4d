//! Seeded Random Waypoint mobility, sampled once per data-gathering round.
//!
//! A [`MobilityProfile`] holds every node's position at every round of the
//! horizon. It is generated once and then replayed read-only by both tree
//! policies, which is what makes pairwise comparisons fair.

mod io;
mod waypoint;

pub use io::{load_profile, save_profile, ProfileFormat, PROFILE_FORMAT_VERSION};
pub use waypoint::Waypoint;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{NodeId, Point, Round};
use crate::rng::{SimRng, Stream};

/// Slack allowed on the per-round displacement bound.
pub const SPEED_TOLERANCE_M: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub width: f64,
    pub height: f64,
    /// May lie outside the field.
    pub sink: Point,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            width: 100.0,
            height: 100.0,
            sink: Point::new(50.0, 300.0),
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::config("width", format!("must be > 0, got {}", self.width)));
        }
        if !(self.height.is_finite() && self.height > 0.0) {
            return Err(Error::config("height", format!("must be > 0, got {}", self.height)));
        }
        if !(self.sink.x.is_finite() && self.sink.y.is_finite()) {
            return Err(Error::config("sink_position", "must be finite"));
        }
        Ok(())
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(0.0, self.width), p.y.clamp(0.0, self.height))
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilityConfig {
    pub node_count: usize,
    pub static_count: usize,
    /// Maximum speed in m/s; speeds are drawn from `(0, v_max]`.
    pub v_max: f64,
    /// Seconds between sampled rounds.
    pub round_period: f64,
    pub horizon_rounds: usize,
    pub seed: u64,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        MobilityConfig {
            node_count: 100,
            static_count: 0,
            v_max: 3.0,
            round_period: 0.25,
            horizon_rounds: 24_000,
            seed: 0,
        }
    }
}

impl MobilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.static_count > self.node_count {
            return Err(Error::config(
                "static_count",
                format!("{} exceeds node_count {}", self.static_count, self.node_count),
            ));
        }
        if !(self.v_max.is_finite() && self.v_max > 0.0) {
            return Err(Error::config("v_max", format!("must be > 0, got {}", self.v_max)));
        }
        if !(self.round_period.is_finite() && self.round_period > 0.0) {
            return Err(Error::config(
                "round_period",
                format!("must be > 0, got {}", self.round_period),
            ));
        }
        if self.horizon_rounds == 0 {
            return Err(Error::config("horizon_rounds", "must be >= 1"));
        }
        if u32::try_from(self.node_count).is_err() || u32::try_from(self.horizon_rounds).is_err() {
            return Err(Error::config("node_count", "node_count and horizon_rounds must fit in u32"));
        }
        Ok(())
    }

    /// Largest legal displacement between consecutive rounds.
    pub fn max_step(&self) -> f64 {
        self.v_max * self.round_period
    }
}

/// Positions of all nodes at every round, stored round-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MobilityProfile {
    field: FieldConfig,
    mobility: MobilityConfig,
    static_set: Vec<NodeId>,
    positions: Vec<Point>,
}

impl MobilityProfile {
    /// Assembles a profile from raw parts and checks every invariant.
    pub fn from_parts(
        field: FieldConfig,
        mobility: MobilityConfig,
        mut static_set: Vec<NodeId>,
        positions: Vec<Point>,
    ) -> Result<Self> {
        static_set.sort_unstable();
        let profile = MobilityProfile {
            field,
            mobility,
            static_set,
            positions,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }

    pub fn mobility(&self) -> &MobilityConfig {
        &self.mobility
    }

    pub fn node_count(&self) -> usize {
        self.mobility.node_count
    }

    pub fn horizon(&self) -> usize {
        self.mobility.horizon_rounds
    }

    /// Sorted ids of nodes that never move.
    pub fn static_set(&self) -> &[NodeId] {
        &self.static_set
    }

    pub fn is_static(&self, node: NodeId) -> bool {
        self.static_set.binary_search(&node).is_ok()
    }

    pub fn position_at(&self, node: NodeId, round: Round) -> Result<Point> {
        if round >= self.horizon() {
            return Err(Error::Bounds {
                what: "round",
                index: round,
                limit: self.horizon(),
            });
        }
        if node >= self.node_count() {
            return Err(Error::Bounds {
                what: "node",
                index: node,
                limit: self.node_count(),
            });
        }
        Ok(self.positions[round * self.node_count() + node])
    }

    /// All node positions at `round`, indexed by node id.
    ///
    /// Panics if `round` is past the horizon.
    #[inline]
    pub fn round_positions(&self, round: Round) -> &[Point] {
        let n = self.node_count();
        &self.positions[round * n..(round + 1) * n]
    }

    pub(crate) fn raw_positions(&self) -> &[Point] {
        &self.positions
    }

    /// Re-checks shape, containment, static-set and speed-bound invariants.
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.mobility.validate()?;
        let n = self.node_count();
        let horizon = self.horizon();
        if self.positions.len() != n * horizon {
            return Err(Error::Validation(format!(
                "expected {} positions ({} rounds x {} nodes), found {}",
                n * horizon,
                horizon,
                n,
                self.positions.len()
            )));
        }
        if self.static_set.len() != self.mobility.static_count {
            return Err(Error::Validation(format!(
                "static set has {} nodes, config says {}",
                self.static_set.len(),
                self.mobility.static_count
            )));
        }
        if self.static_set.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("duplicate id in static set".into()));
        }
        if let Some(&bad) = self.static_set.iter().find(|&&id| id >= n) {
            return Err(Error::Validation(format!("static node id {bad} out of range")));
        }
        let bound = self.mobility.max_step() + SPEED_TOLERANCE_M;
        for round in 0..horizon {
            let here = self.round_positions(round);
            for (node, &p) in here.iter().enumerate() {
                if !(p.x.is_finite() && p.y.is_finite()) || !self.field.contains(p) {
                    return Err(Error::Validation(format!(
                        "node {node} at round {round} lies outside the field: ({}, {})",
                        p.x, p.y
                    )));
                }
            }
            if round == 0 {
                continue;
            }
            let prev = self.round_positions(round - 1);
            for node in 0..n {
                let step = prev[node].distance(here[node]);
                if step > bound {
                    return Err(Error::Validation(format!(
                        "node {node} moves {step} m between rounds {} and {round}, bound is {}",
                        round - 1,
                        self.mobility.max_step()
                    )));
                }
            }
        }
        for &id in &self.static_set {
            let origin = self.positions[id];
            if (1..horizon).any(|r| self.positions[r * n + id] != origin) {
                return Err(Error::Validation(format!("static node {id} moves")));
            }
        }
        Ok(())
    }
}

/// Generates a Random Waypoint profile.
///
/// Draw order on the mobility stream: initial positions (node order), the
/// static-set shuffle, the first waypoint and speed of each mobile node (node
/// order), then re-picks as they occur, round by round in node order.
pub fn generate_profile(field: FieldConfig, mob: MobilityConfig) -> Result<MobilityProfile> {
    field.validate()?;
    mob.validate()?;
    let n = mob.node_count;
    let mut rng = SimRng::new(mob.seed, Stream::Mobility);

    let initial: Vec<Point> = (0..n).map(|_| random_point(&field, &mut rng)).collect();

    let mut ids: Vec<NodeId> = (0..n).collect();
    rng.shuffle(&mut ids);
    let mut static_set = ids[..mob.static_count].to_vec();
    static_set.sort_unstable();
    let mut is_static = vec![false; n];
    for &id in &static_set {
        is_static[id] = true;
    }

    let mut walkers: Vec<Option<Waypoint>> = initial
        .iter()
        .enumerate()
        .map(|(id, &p)| (!is_static[id]).then(|| Waypoint::start(p, &field, mob.v_max, &mut rng)))
        .collect();

    let mut positions = Vec::with_capacity(n * mob.horizon_rounds);
    positions.extend_from_slice(&initial);
    for round in 1..mob.horizon_rounds {
        let prev = (round - 1) * n;
        for node in 0..n {
            let p = match walkers[node].as_mut() {
                Some(w) => w.advance(mob.round_period, &field, mob.v_max, &mut rng),
                None => positions[prev + node],
            };
            positions.push(p);
        }
    }

    Ok(MobilityProfile {
        field,
        mobility: mob,
        static_set,
        positions,
    })
}

pub(crate) fn random_point(field: &FieldConfig, rng: &mut SimRng) -> Point {
    let x = rng.unit_closed_open() * field.width;
    let y = rng.unit_closed_open() * field.height;
    Point::new(x, y)
}
