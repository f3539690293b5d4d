use crate::geom::Point;
use crate::rng::SimRng;

use super::{random_point, FieldConfig};

/// Motion state of one mobile node: straight-line travel toward `target`
/// at `speed`, re-picking target and speed on arrival with no pause.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub position: Point,
    pub target: Point,
    pub speed: f64,
}

impl Waypoint {
    pub(crate) fn start(position: Point, field: &FieldConfig, v_max: f64, rng: &mut SimRng) -> Self {
        let mut w = Waypoint {
            position,
            target: position,
            speed: v_max,
        };
        w.repick(field, v_max, rng);
        w
    }

    fn repick(&mut self, field: &FieldConfig, v_max: f64, rng: &mut SimRng) {
        self.target = random_point(field, rng);
        self.speed = rng.unit_open_closed() * v_max;
    }

    /// Moves for `dt` seconds and returns the new position.
    pub fn advance(&mut self, dt: f64, field: &FieldConfig, v_max: f64, rng: &mut SimRng) -> Point {
        let mut time_left = dt;
        while time_left > 0.0 {
            let dist = self.position.distance(self.target);
            let needed = dist / self.speed;
            if needed <= time_left {
                self.position = self.target;
                time_left -= needed;
                self.repick(field, v_max, rng);
            } else {
                let frac = self.speed * time_left / dist;
                let p = Point::new(
                    self.position.x + (self.target.x - self.position.x) * frac,
                    self.position.y + (self.target.y - self.position.y) * frac,
                );
                self.position = field.clamp(p);
                time_left = 0.0;
            }
        }
        self.position
    }
}
