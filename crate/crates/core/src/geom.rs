use serde::{Deserialize, Serialize};

/// Node identifier; ids are dense in `0..node_count`.
pub type NodeId = usize;

/// Round index, starting at 0.
pub type Round = usize;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(self, other: Point) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Unit-disk link test. The boundary is inclusive.
#[inline]
pub fn within_range(a: Point, b: Point, range: f64) -> bool {
    a.distance(b) <= range
}
