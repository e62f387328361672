//! Manhattan street grid on a torus.
//!
//! Streets are the full axis-aligned lines at multiples of the block
//! spacing; the area wraps around at its boundary so vehicle density stays
//! stationary over long runs.

/// Square street grid with wrap-around boundaries.
#[derive(Debug, Clone, Copy)]
pub struct ManhattanGrid {
    side_m: f64,
    block_m: f64,
}

const SNAP_EPS: f64 = 1e-6;

impl ManhattanGrid {
    /// `block_m` must divide `side_m` so the street pattern tiles the torus.
    pub fn new(side_m: f64, block_m: f64) -> Result<Self, String> {
        if !(side_m > 0.0 && block_m > 0.0) {
            return Err(format!("grid dimensions must be positive: side {side_m}, block {block_m}"));
        }
        let ratio = side_m / block_m;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 {
            return Err(format!("block {block_m} m does not divide area side {side_m} m"));
        }
        Ok(Self { side_m, block_m })
    }

    pub fn side_m(&self) -> f64 {
        self.side_m
    }

    pub fn block_m(&self) -> f64 {
        self.block_m
    }

    /// Wrap a coordinate into [0, side).
    pub fn wrap(&self, v: f64) -> f64 {
        let w = v.rem_euclid(self.side_m);
        if w >= self.side_m {
            0.0
        } else {
            w
        }
    }

    /// Signed smallest-magnitude difference `to - from` on the torus.
    pub fn torus_delta(&self, from: f64, to: f64) -> f64 {
        let mut d = (to - from).rem_euclid(self.side_m);
        if d > self.side_m / 2.0 {
            d -= self.side_m;
        }
        d
    }

    pub fn torus_distance(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let dx = self.torus_delta(a.0, b.0);
        let dy = self.torus_delta(a.1, b.1);
        (dx * dx + dy * dy).sqrt()
    }

    /// Street coordinate (a multiple of the block spacing) the value sits
    /// on, if any.
    pub fn street_line(&self, v: f64) -> Option<f64> {
        let nearest = (v / self.block_m).round() * self.block_m;
        if (v - nearest).abs() < SNAP_EPS {
            Some(self.wrap(nearest))
        } else {
            None
        }
    }

    /// Horizontal street (fixed y) the position lies on, if any.
    pub fn horizontal_street(&self, pos: (f64, f64)) -> Option<f64> {
        self.street_line(pos.1)
    }

    /// Vertical street (fixed x) the position lies on, if any.
    pub fn vertical_street(&self, pos: (f64, f64)) -> Option<f64> {
        self.street_line(pos.0)
    }

    pub fn on_street(&self, pos: (f64, f64)) -> bool {
        self.horizontal_street(pos).is_some() || self.vertical_street(pos).is_some()
    }
}
