use serde::{Deserialize, Serialize};

use crate::geom::{NodeId, Point};
use crate::mobility::{random_point, FieldConfig};
use crate::rng::SimRng;

/// Probe locations drawn per evaluation.
pub const PROBE_COUNT: usize = 100;

/// Target fractions advance in hundredths.
const TARGET_STEPS: usize = 100;

/// Share of `probes` not within `sensing_range` (inclusive) of any live node.
pub fn uncovered_fraction(probes: &[Point], positions: &[Point], live: &[NodeId], sensing_range: f64) -> f64 {
    if probes.is_empty() {
        return 0.0;
    }
    let r2 = sensing_range * sensing_range;
    let uncovered = probes
        .iter()
        .filter(|&&p| !live.iter().any(|&n| positions[n].distance_sq(p) <= r2))
        .count();
    uncovered as f64 / probes.len() as f64
}

/// Samples [`PROBE_COUNT`] uniform points in the field and returns the
/// fraction left uncovered by the live nodes.
pub fn coverage_fraction(
    field: &FieldConfig,
    positions: &[Point],
    live: &[NodeId],
    sensing_range: f64,
    rng: &mut SimRng,
) -> f64 {
    let probes: Vec<Point> = (0..PROBE_COUNT).map(|_| random_point(field, rng)).collect();
    uncovered_fraction(&probes, positions, live, sensing_range)
}

/// First-hit times of the coverage-loss targets 0.01, 0.02, ...
///
/// Targets are recorded in increasing order, so the recorded set is always
/// a prefix: `times_s[i]` belongs to target `(i + 1) / 100`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverageLossCurve {
    times_s: Vec<f64>,
}

impl CoverageLossCurve {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn target(index: usize) -> f64 {
        (index + 1) as f64 / TARGET_STEPS as f64
    }

    /// `(target fraction, first-hit time)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times_s.iter().enumerate().map(|(i, &t)| (Self::target(i), t))
    }

    pub fn times(&self) -> &[f64] {
        &self.times_s
    }

    pub fn len(&self) -> usize {
        self.times_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_s.is_empty()
    }

    /// First-hit time of `hundredths / 100`.
    pub fn time_for(&self, hundredths: usize) -> Option<f64> {
        hundredths.checked_sub(1).and_then(|i| self.times_s.get(i)).copied()
    }

    /// Largest target fraction reached by `time_s` (0 if none).
    pub fn fraction_at(&self, time_s: f64) -> f64 {
        let reached = self.times_s.iter().take_while(|&&t| t <= time_s).count();
        reached as f64 / TARGET_STEPS as f64
    }
}

/// Records `time_s` for every unrecorded target at or below `fraction`.
/// Earlier records are never overwritten.
pub fn update_coverage_loss(curve: &mut CoverageLossCurve, fraction: f64, time_s: f64) {
    while curve.times_s.len() < TARGET_STEPS
        && fraction + 1e-12 >= CoverageLossCurve::target(curve.times_s.len())
    {
        curve.times_s.push(time_s);
    }
}
