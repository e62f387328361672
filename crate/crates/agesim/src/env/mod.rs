//! Vehicular environment: Manhattan mobility plus the three-regime V2V
//! channel, producing the per-slot K x K x N gain tensor.

pub mod channel;
pub mod grid;
pub mod mobility;

pub use channel::{
    channel_gain, classify_link, gain_matrix, path_loss_db, ChannelParams, LinkClass,
    LinkGeometry, LinkRand,
};
pub use grid::ManhattanGrid;
pub use mobility::{init_pair, step_mobility, Heading, MobilityParams, VuePairState};

use rand_chacha::ChaCha12Rng;

use crate::rng::{domain, substream};

/// Authoritative environment state for one run.
pub struct VehicularEnv {
    grid: ManhattanGrid,
    pairs: Vec<VuePairState>,
    links: Vec<Vec<LinkRand>>,
    mobility_rngs: Vec<ChaCha12Rng>,
    channel: ChannelParams,
    mobility: MobilityParams,
    tau_s: f64,
}

impl VehicularEnv {
    pub fn new(
        seed: u64,
        n_pairs: usize,
        n_rbs: usize,
        channel: ChannelParams,
        mobility: MobilityParams,
        tau_s: f64,
    ) -> Result<Self, String> {
        let grid = ManhattanGrid::new(mobility.area_m, mobility.block_m)?;
        let mut mobility_rngs: Vec<ChaCha12Rng> =
            (0..n_pairs).map(|k| substream(seed, domain::MOBILITY, k as u64)).collect();
        let pairs: Vec<VuePairState> = mobility_rngs
            .iter_mut()
            .map(|rng| init_pair(&grid, &mobility, rng))
            .collect();
        let links: Vec<Vec<LinkRand>> = (0..n_pairs)
            .map(|tx| {
                (0..n_pairs)
                    .map(|rx| {
                        let stream = substream(seed, domain::CHANNEL, (tx * n_pairs + rx) as u64);
                        LinkRand::init(stream, &channel, n_rbs)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { grid, pairs, links, mobility_rngs, channel, mobility, tau_s })
    }

    pub fn grid(&self) -> &ManhattanGrid {
        &self.grid
    }

    pub fn pairs(&self) -> &[VuePairState] {
        &self.pairs
    }

    /// Gain tensor for the current slot.
    pub fn gains(&self) -> Vec<Vec<Vec<f64>>> {
        gain_matrix(&self.grid, &self.pairs, &self.channel, &self.links)
    }

    /// Classification of pair `k`'s own link in the current slot.
    pub fn own_link_class(&self, k: usize) -> LinkClass {
        classify_link(&self.grid, self.pairs[k].tx, self.pairs[k].rx).class
    }

    /// Move every vehicle one slot forward and evolve all link randomness.
    pub fn advance(&mut self) {
        for (state, rng) in self.pairs.iter_mut().zip(self.mobility_rngs.iter_mut()) {
            *state = step_mobility(state, &self.grid, &self.mobility, self.tau_s, rng);
        }
        for row in self.links.iter_mut() {
            for link in row.iter_mut() {
                link.advance(&self.channel);
            }
        }
    }
}
