//! Three-regime V2V channel: street-topology link classification,
//! log-distance path loss per class, AR(1) log-normal shadowing, and
//! per-RB Rayleigh fading.
//!
//! Every constant here is a configuration value; the defaults are typical
//! published V2V figures, not measurements of any particular campaign.

use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use super::grid::ManhattanGrid;
use super::mobility::VuePairState;
use crate::rng::{normal, unit_exponential};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Path-loss exponent on line-of-sight streets.
    pub los_exponent: f64,
    /// Reference loss (dB) at `reference_distance_m` for the LOS class.
    pub reference_loss_db: f64,
    pub reference_distance_m: f64,
    /// Extra loss (dB) for turning one corner with line of sight to it.
    pub wlos_corner_loss_db: f64,
    /// Path-loss exponent off the line-of-sight street.
    pub nlos_exponent: f64,
    /// Extra loss (dB) per corner on non-line-of-sight routes.
    pub nlos_corner_loss_db: f64,
    /// Log-normal shadowing standard deviation (dB); zero disables it.
    pub shadow_std_db: f64,
    /// Per-slot AR(1) coefficient of the shadowing process.
    pub shadow_ar1: f64,
    /// Rayleigh block fading per RB.
    pub fading: bool,
    /// Per-slot AR(1) coefficient of the fading amplitude; zero redraws
    /// independently each slot.
    pub fading_ar1: f64,
    /// Distances are clamped below this value (m).
    pub min_distance_m: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            los_exponent: 1.77,
            reference_loss_db: 63.3,
            reference_distance_m: 10.0,
            wlos_corner_loss_db: 10.0,
            nlos_exponent: 2.9,
            nlos_corner_loss_db: 10.0,
            shadow_std_db: 3.0,
            shadow_ar1: 0.9,
            fading: true,
            fading_ar1: 0.0,
            min_distance_m: 1.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.los_exponent <= 0.0 || self.nlos_exponent <= 0.0 {
            errs.push("channel: path-loss exponents must be positive".into());
        }
        if self.shadow_std_db < 0.0 {
            errs.push("channel: shadow_std_db must be nonnegative".into());
        }
        if !(0.0..1.0).contains(&self.shadow_ar1) || !(0.0..1.0).contains(&self.fading_ar1) {
            errs.push("channel: AR(1) coefficients must lie in [0, 1)".into());
        }
        if self.reference_distance_m <= 0.0 || self.min_distance_m <= 0.0 {
            errs.push("channel: reference and minimum distances must be positive".into());
        }
        if self.wlos_corner_loss_db < 0.0 || self.nlos_corner_loss_db < 0.0 {
            errs.push("channel: corner losses must be nonnegative".into());
        }
        errs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkClass {
    Los,
    Wlos,
    Nlos,
}

impl LinkClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LinkClass::Los => "LOS",
            LinkClass::Wlos => "WLOS",
            LinkClass::Nlos => "NLOS",
        }
    }
}

/// Street-topology relation of a transmitter-receiver placement, plus the
/// distances the path-loss formula needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub class: LinkClass,
    /// Direct (torus Euclidean) distance (m).
    pub direct_m: f64,
    /// Along-street legs of the routed path (m); equals `(direct, 0)` for LOS.
    pub legs_m: (f64, f64),
    /// Corners turned along the routed path.
    pub corners: u8,
}

impl LinkGeometry {
    pub fn route_m(&self) -> f64 {
        (self.legs_m.0 + self.legs_m.1).max(self.direct_m)
    }
}

/// Classify a link from the street topology of its endpoints.
///
/// Same street line: LOS. Perpendicular streets whose shared intersection
/// is within one block of both endpoints: WLOS around that corner.
/// Everything else: NLOS with a two-leg rectilinear surrogate route.
pub fn classify_link(grid: &ManhattanGrid, tx: (f64, f64), rx: (f64, f64)) -> LinkGeometry {
    let direct = grid.torus_distance(tx, rx);
    let tx_h = grid.horizontal_street(tx);
    let tx_v = grid.vertical_street(tx);
    let rx_h = grid.horizontal_street(rx);
    let rx_v = grid.vertical_street(rx);

    // Collinear on either axis is line of sight.
    if matches!((tx_h, rx_h), (Some(a), Some(b)) if a == b)
        || matches!((tx_v, rx_v), (Some(a), Some(b)) if a == b)
    {
        return LinkGeometry { class: LinkClass::Los, direct_m: direct, legs_m: (direct, 0.0), corners: 0 };
    }

    // Perpendicular placements: route through the shared intersection.
    let mut best: Option<LinkGeometry> = None;
    let mut consider = |g: LinkGeometry| {
        let better = match &best {
            None => true,
            Some(b) => {
                (g.class == LinkClass::Wlos && b.class == LinkClass::Nlos)
                    || (g.class == b.class && g.route_m() < b.route_m())
            }
        };
        if better {
            best = Some(g);
        }
    };

    if let (Some(hy), Some(vx)) = (tx_h, rx_v) {
        consider(corner_route(grid, tx.0, vx, rx.1, hy, direct));
    }
    if let (Some(vx), Some(hy)) = (tx_v, rx_h) {
        consider(corner_route(grid, rx.0, vx, tx.1, hy, direct));
    }
    if let Some(g) = best {
        return g;
    }

    // Parallel streets: rectilinear two-corner surrogate route.
    let legs = (grid.torus_delta(tx.0, rx.0).abs(), grid.torus_delta(tx.1, rx.1).abs());
    LinkGeometry { class: LinkClass::Nlos, direct_m: direct, legs_m: legs, corners: 2 }
}

/// Route along a horizontal street at `hy` and a vertical street at `vx`
/// meeting at their intersection.
fn corner_route(
    grid: &ManhattanGrid,
    along_x: f64,
    corner_x: f64,
    along_y: f64,
    corner_y: f64,
    direct: f64,
) -> LinkGeometry {
    let leg_a = grid.torus_delta(along_x, corner_x).abs();
    let leg_b = grid.torus_delta(along_y, corner_y).abs();
    let class = if leg_a <= grid.block_m() && leg_b <= grid.block_m() {
        LinkClass::Wlos
    } else {
        LinkClass::Nlos
    };
    LinkGeometry { class, direct_m: direct, legs_m: (leg_a, leg_b), corners: 1 }
}

/// Deterministic path loss (dB) of a classified link.
pub fn path_loss_db(geom: &LinkGeometry, params: &ChannelParams) -> f64 {
    let log_dist = |d: f64| (d.max(params.min_distance_m) / params.reference_distance_m).log10();
    match geom.class {
        LinkClass::Los => params.reference_loss_db + 10.0 * params.los_exponent * log_dist(geom.direct_m),
        LinkClass::Wlos => {
            params.reference_loss_db
                + 10.0 * params.los_exponent * log_dist(geom.route_m())
                + params.wlos_corner_loss_db
        }
        LinkClass::Nlos => {
            params.reference_loss_db
                + 10.0 * params.nlos_exponent * log_dist(geom.route_m())
                + geom.corners as f64 * params.nlos_corner_loss_db
        }
    }
}

/// Random per-link channel state: shadowing and per-RB fading, advanced
/// once per slot from the link's own substream.
#[derive(Debug, Clone)]
pub struct LinkRand {
    rng: ChaCha12Rng,
    shadow_db: f64,
    fading_amp: Vec<(f64, f64)>,
    fading_pow: Vec<f64>,
}

impl LinkRand {
    pub fn init(mut rng: ChaCha12Rng, params: &ChannelParams, n_rbs: usize) -> Self {
        let shadow_db =
            if params.shadow_std_db > 0.0 { params.shadow_std_db * normal(&mut rng) } else { 0.0 };
        let mut fading_amp = Vec::new();
        let mut fading_pow = vec![1.0; n_rbs];
        if params.fading {
            if params.fading_ar1 > 0.0 {
                let scale = std::f64::consts::FRAC_1_SQRT_2;
                for pow in fading_pow.iter_mut() {
                    let amp = (scale * normal(&mut rng), scale * normal(&mut rng));
                    *pow = amp.0 * amp.0 + amp.1 * amp.1;
                    fading_amp.push(amp);
                }
            } else {
                for pow in fading_pow.iter_mut() {
                    *pow = unit_exponential(&mut rng);
                }
            }
        }
        Self { rng, shadow_db, fading_amp, fading_pow }
    }

    /// One slot of shadowing and fading evolution.
    pub fn advance(&mut self, params: &ChannelParams) {
        if params.shadow_std_db > 0.0 {
            let rho = params.shadow_ar1;
            self.shadow_db = rho * self.shadow_db
                + (1.0 - rho * rho).sqrt() * params.shadow_std_db * normal(&mut self.rng);
        }
        if params.fading {
            if params.fading_ar1 > 0.0 {
                let rho = params.fading_ar1;
                let diff = (1.0 - rho * rho).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
                for (amp, pow) in self.fading_amp.iter_mut().zip(self.fading_pow.iter_mut()) {
                    amp.0 = rho * amp.0 + diff * normal(&mut self.rng);
                    amp.1 = rho * amp.1 + diff * normal(&mut self.rng);
                    *pow = amp.0 * amp.0 + amp.1 * amp.1;
                }
            } else {
                for pow in self.fading_pow.iter_mut() {
                    *pow = unit_exponential(&mut self.rng);
                }
            }
        }
    }

    pub fn shadow_db(&self) -> f64 {
        self.shadow_db
    }

    pub fn fading_pow(&self, rb: usize) -> f64 {
        self.fading_pow[rb]
    }
}

/// Linear power gain of a link on one RB given the current random state.
pub fn channel_gain(geom: &LinkGeometry, params: &ChannelParams, rb: usize, link: &LinkRand) -> f64 {
    let pl_db = path_loss_db(geom, params);
    let fade = if params.fading { link.fading_pow(rb) } else { 1.0 };
    10f64.powf((link.shadow_db() - pl_db) / 10.0) * fade
}

/// Full K x K x N gain tensor: entry `[tx_pair][rx_pair][rb]` is the gain
/// from the transmitter of `tx_pair` to the receiver of `rx_pair`.
pub fn gain_matrix(
    grid: &ManhattanGrid,
    states: &[VuePairState],
    params: &ChannelParams,
    links: &[Vec<LinkRand>],
) -> Vec<Vec<Vec<f64>>> {
    let k = states.len();
    let n_rbs = if k > 0 { links[0][0].fading_pow.len() } else { 0 };
    let mut gains = vec![vec![vec![0.0; n_rbs]; k]; k];
    for (tx_idx, tx_state) in states.iter().enumerate() {
        for (rx_idx, rx_state) in states.iter().enumerate() {
            let geom = classify_link(grid, tx_state.tx, rx_state.rx);
            let link = &links[tx_idx][rx_idx];
            for rb in 0..n_rbs {
                gains[tx_idx][rx_idx][rb] = channel_gain(&geom, params, rb, link);
            }
        }
    }
    gains
}
