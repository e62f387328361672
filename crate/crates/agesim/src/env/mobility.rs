//! Vehicle mobility: transmitters drive the street grid, turning at
//! intersections; each receiver trails its transmitter on the same street
//! at a mean-reverting gap (rear-end scenario).

use rand::RngExt;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::grid::ManhattanGrid;
use crate::rng::normal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilityParams {
    /// Side of the square simulation area (m).
    pub area_m: f64,
    /// Street spacing (m); must divide `area_m`.
    pub block_m: f64,
    /// Vehicle speed (km/h).
    pub speed_kmh: f64,
    /// Per-vehicle speed jitter as a fraction of the base speed.
    pub speed_jitter: f64,
    /// Mean transmitter-receiver gap (m).
    pub mean_gap_m: f64,
    pub gap_min_m: f64,
    pub gap_max_m: f64,
    /// Mean-reversion rate of the gap walk per slot.
    pub gap_revert: f64,
    /// Gap walk noise per slot (m).
    pub gap_sigma_m: f64,
    /// Turn probabilities at an intersection; straight takes the rest.
    pub turn_left: f64,
    pub turn_right: f64,
}

impl Default for MobilityParams {
    fn default() -> Self {
        Self {
            area_m: 250.0,
            block_m: 50.0,
            speed_kmh: 60.0,
            speed_jitter: 0.0,
            mean_gap_m: 15.0,
            gap_min_m: 5.0,
            gap_max_m: 30.0,
            gap_revert: 0.05,
            gap_sigma_m: 0.25,
            turn_left: 0.25,
            turn_right: 0.25,
        }
    }
}

impl MobilityParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if ManhattanGrid::new(self.area_m, self.block_m).is_err() {
            errs.push(format!(
                "mobility: block_m {} must divide area_m {}",
                self.block_m, self.area_m
            ));
        }
        if self.speed_kmh < 0.0 {
            errs.push("mobility: speed_kmh must be nonnegative".into());
        }
        if !(self.speed_jitter >= 0.0 && self.speed_jitter < 1.0) {
            errs.push("mobility: speed_jitter must be in [0, 1)".into());
        }
        if !(self.gap_min_m > 0.0 && self.gap_min_m <= self.mean_gap_m && self.mean_gap_m <= self.gap_max_m)
        {
            errs.push("mobility: gap bounds must satisfy 0 < gap_min <= mean_gap <= gap_max".into());
        }
        if !(self.gap_revert >= 0.0 && self.gap_revert <= 1.0) || self.gap_sigma_m < 0.0 {
            errs.push("mobility: gap walk parameters out of range".into());
        }
        if self.turn_left < 0.0 || self.turn_right < 0.0 || self.turn_left + self.turn_right > 1.0 {
            errs.push("mobility: turn probabilities must be nonnegative and sum to at most 1".into());
        }
        errs
    }
}

/// Unit heading along a street axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Heading {
    pub dx: i8,
    pub dy: i8,
}

impl Heading {
    fn left(self) -> Self {
        Heading { dx: -self.dy, dy: self.dx }
    }

    fn right(self) -> Self {
        Heading { dx: self.dy, dy: -self.dx }
    }

    pub fn as_f64(self) -> (f64, f64) {
        (self.dx as f64, self.dy as f64)
    }
}

/// State of one transmitter-receiver pair.
#[derive(Debug, Clone, Copy)]
pub struct VuePairState {
    pub tx: (f64, f64),
    pub rx: (f64, f64),
    pub heading: Heading,
    /// Speed (m/s), fixed per vehicle at initialization.
    pub speed_mps: f64,
    /// Along-street distance from receiver to transmitter (m).
    pub gap_m: f64,
}

/// Place a pair on a uniformly random street with the mean gap.
pub fn init_pair(grid: &ManhattanGrid, params: &MobilityParams, rng: &mut ChaCha12Rng) -> VuePairState {
    let streets = (grid.side_m() / grid.block_m()).round() as i64;
    let street_coord = rng.random_range(0..streets) as f64 * grid.block_m();
    let along = rng.random_range(0.0..grid.side_m());
    let positive: bool = rng.random();
    let horizontal: bool = rng.random();
    let (tx, heading) = if horizontal {
        (
            (along, street_coord),
            Heading { dx: if positive { 1 } else { -1 }, dy: 0 },
        )
    } else {
        (
            (street_coord, along),
            Heading { dx: 0, dy: if positive { 1 } else { -1 } },
        )
    };
    let jitter = if params.speed_jitter > 0.0 {
        1.0 + params.speed_jitter * rng.random_range(-1.0..1.0)
    } else {
        1.0
    };
    let speed_mps = params.speed_kmh / 3.6 * jitter;
    let gap_m = params.mean_gap_m;
    let mut state = VuePairState { tx, rx: tx, heading, speed_mps, gap_m };
    state.rx = follower_position(grid, &state);
    state
}

fn follower_position(grid: &ManhattanGrid, s: &VuePairState) -> (f64, f64) {
    let (hx, hy) = s.heading.as_f64();
    (grid.wrap(s.tx.0 - s.gap_m * hx), grid.wrap(s.tx.1 - s.gap_m * hy))
}

/// Advance one pair by one slot: the transmitter drives `speed * tau`
/// along its street, turning at every intersection it crosses; the gap
/// then takes one clamped mean-reverting step and the receiver is placed
/// that far behind on the same street.
pub fn step_mobility(
    state: &VuePairState,
    grid: &ManhattanGrid,
    params: &MobilityParams,
    tau_s: f64,
    rng: &mut ChaCha12Rng,
) -> VuePairState {
    let mut s = *state;
    let mut remaining = s.speed_mps * tau_s;
    let block = grid.block_m();
    let eps = 1e-9 * block;

    while remaining > 0.0 {
        // Distance to the next intersection strictly ahead.
        let moving = if s.heading.dx != 0 { s.tx.0 } else { s.tx.1 };
        let offset = moving.rem_euclid(block);
        let forward = s.heading.dx + s.heading.dy > 0;
        let mut to_node = if forward { block - offset } else { offset };
        if to_node < eps {
            to_node = block;
        }

        if remaining < to_node {
            s.tx = advance(grid, s.tx, s.heading, remaining);
            break;
        }

        s.tx = advance(grid, s.tx, s.heading, to_node);
        // Snap exactly onto the intersection to keep street membership clean.
        s.tx.0 = grid.wrap((s.tx.0 / block).round() * block);
        s.tx.1 = grid.wrap((s.tx.1 / block).round() * block);
        remaining -= to_node;

        let u: f64 = rng.random();
        if u < params.turn_left {
            s.heading = s.heading.left();
        } else if u < params.turn_left + params.turn_right {
            s.heading = s.heading.right();
        }
    }

    if params.gap_sigma_m > 0.0 || params.gap_revert > 0.0 {
        let noise = if params.gap_sigma_m > 0.0 { params.gap_sigma_m * normal(rng) } else { 0.0 };
        s.gap_m = (s.gap_m + params.gap_revert * (params.mean_gap_m - s.gap_m) + noise)
            .clamp(params.gap_min_m, params.gap_max_m);
    }
    s.rx = follower_position(grid, &s);
    s
}

fn advance(grid: &ManhattanGrid, pos: (f64, f64), h: Heading, dist: f64) -> (f64, f64) {
    let (hx, hy) = h.as_f64();
    (grid.wrap(pos.0 + hx * dist), grid.wrap(pos.1 + hy * dist))
}
