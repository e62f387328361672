//! Per-slot radio and traffic physics: interference aggregation, Shannon
//! rate, the transmitter packet queue, and the receiver's age state.
//!
//! The queue stores per-packet generation slots and remaining bits, which
//! is the bit-exact semantics behind the scalar queue recursion
//! Q(t+1) = max(Q(t) - R(t), 0) + A; the recursion is recovered as the
//! packet-count projection of this state.

use std::collections::VecDeque;

/// Aggregate interference (W) at the receiver of `pair` on RB `rb` from
/// every other transmitter's chosen power.
pub fn interference_at(
    pair: usize,
    rb: usize,
    actions_w: &[Vec<f64>],
    gains: &[Vec<Vec<f64>>],
) -> f64 {
    let mut total = 0.0;
    for (other, action) in actions_w.iter().enumerate() {
        if other != pair {
            total += action[rb] * gains[other][pair][rb];
        }
    }
    total
}

/// Shannon-rate packets per slot across all RBs.
///
/// `rate = tau/Z * sum_n W log2(1 + P_n h_n / (N0 W + I_n))`; RBs with
/// zero allocated power contribute nothing.
pub fn transmission_rate(
    action_w: &[f64],
    own_gains: &[f64],
    interference_w: &[f64],
    rb_bandwidth_hz: f64,
    noise_psd_w_hz: f64,
    slot_s: f64,
    packet_bits: f64,
) -> f64 {
    let noise_w = noise_psd_w_hz * rb_bandwidth_hz;
    let mut bits_per_s = 0.0;
    for ((&p, &h), &i) in action_w.iter().zip(own_gains).zip(interference_w) {
        if p > 0.0 {
            bits_per_s += rb_bandwidth_hz * (1.0 + p * h / (noise_w + i)).log2();
        }
    }
    bits_per_s * slot_s / packet_bits
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Packet {
    generation_slot: u64,
    remaining_bits: f64,
}

/// Transmitter-side FIFO of timestamped status updates with fractional
/// arrivals accumulated between slots.
///
/// With `supersede` on, a newly generated update replaces everything still
/// queued (last-come-first-served with preemption); off by default, so the
/// queue follows the plain recursion.
#[derive(Debug, Clone)]
pub struct PacketQueue {
    packets: VecDeque<Packet>,
    arrival_acc: f64,
    packet_bits: f64,
    supersede: bool,
}

impl PacketQueue {
    pub fn new(packet_bits: f64) -> Self {
        Self::with_policy(packet_bits, false)
    }

    pub fn with_policy(packet_bits: f64, supersede: bool) -> Self {
        assert!(packet_bits > 0.0);
        Self { packets: VecDeque::new(), arrival_acc: 0.0, packet_bits, supersede }
    }

    /// Queue length in packets (fractional; partially served head counts
    /// by its remaining share).
    pub fn len_packets(&self) -> f64 {
        self.packets.iter().map(|p| p.remaining_bits).sum::<f64>() / self.packet_bits
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    /// Serve up to `rate_pkts * Z` bits FIFO during slot `t`, then credit
    /// the arrival accumulator and enqueue whole packets generated at
    /// `t + 1`. Returns the generation slot of the newest packet fully
    /// delivered this slot, and the bits actually served.
    pub fn serve(&mut self, rate_pkts: f64, arrival_pkts: f64, t: u64) -> (Option<u64>, f64) {
        debug_assert!(rate_pkts >= 0.0 && arrival_pkts >= 0.0);
        let mut budget_bits = rate_pkts * self.packet_bits;
        let mut served_bits = 0.0;
        let mut newest_delivered = None;
        while budget_bits > 0.0 {
            let Some(head) = self.packets.front_mut() else { break };
            let take = head.remaining_bits.min(budget_bits);
            head.remaining_bits -= take;
            budget_bits -= take;
            served_bits += take;
            if head.remaining_bits <= 1e-9 {
                newest_delivered = Some(head.generation_slot);
                self.packets.pop_front();
            }
        }

        self.arrival_acc += arrival_pkts;
        let mut arrived = false;
        while self.arrival_acc >= 1.0 - 1e-12 {
            self.arrival_acc -= 1.0;
            arrived = true;
            self.packets.push_back(Packet {
                generation_slot: t + 1,
                remaining_bits: self.packet_bits,
            });
        }
        if self.supersede && arrived {
            // Only the freshest update is worth sending.
            let newest = self.packets.pop_back().expect("just pushed");
            self.packets.clear();
            self.packets.push_back(newest);
        }
        (newest_delivered, served_bits)
    }
}

/// Receiver-side age state: the current AoI and the generation instant of
/// the newest delivered update.
#[derive(Debug, Clone, Copy, Default)]
pub struct AoiState {
    /// Age of information (s) at the beginning of the current slot.
    pub delta_s: f64,
    /// Generation instant (s) of the freshest update received, if any.
    pub generation_s: Option<f64>,
}

/// Advance the age across the slot-`t` boundary.
///
/// A delivery during slot `t` takes effect at the start of slot `t + 1`:
/// the age becomes `tau (t + 1) - tau g` for generation slot `g`. With no
/// delivery recorded yet, the age simply grows by one slot. Deliveries
/// older than the stored update are ignored.
pub fn update_aoi(state: &AoiState, delivered_gen: Option<u64>, t: u64, tau_s: f64) -> AoiState {
    let mut next = *state;
    if let Some(gen) = delivered_gen {
        debug_assert!(gen <= t + 1, "delivered update generated in the future");
        let gen_s = tau_s * gen as f64;
        if next.generation_s.is_none_or(|cur| gen_s > cur) {
            next.generation_s = Some(gen_s);
        }
    }
    next.delta_s = match next.generation_s {
        Some(gen_s) => tau_s * (t + 1) as f64 - gen_s,
        None => next.delta_s + tau_s,
    };
    next
}
