//! Aggregated run statistics: CCDF, violation probability, average age,
//! and per-pair prediction error.

use serde::Serialize;

use super::SlotRecord;

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("no samples to aggregate")]
    NoSamples,
    #[error("trace has no predictions for pair {0}")]
    NoPredictions(usize),
}

/// Aggregate statistics of one run, pooled over pairs and post-warmup slots.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub policy: String,
    pub seed: u64,
    pub warmup_slots: u64,
    /// Slots actually pooled (per pair).
    pub pooled_slots: u64,
    /// Empirical Pr(AoI > d).
    pub violation_prob: f64,
    pub avg_aoi_ms: f64,
    /// (threshold_ms, Pr(AoI > threshold)) points on a slot-width grid.
    pub ccdf: Vec<(f64, f64)>,
    /// Per-pair prediction RMSE (ms); absent for the random baseline.
    pub per_pair_rmse_ms: Option<Vec<f64>>,
    /// Per-pair mean posterior variance (ms^2); absent for the baseline.
    pub per_pair_mean_sigma2_ms2: Option<Vec<f64>>,
    pub fallback_slots: u64,
    pub refit_events: u64,
}

impl MetricsReport {
    /// NaN-free zeroed report for an empty run.
    pub fn empty(policy: &str, seed: u64, warmup: u64) -> Self {
        Self {
            policy: policy.to_string(),
            seed,
            warmup_slots: warmup,
            pooled_slots: 0,
            violation_prob: 0.0,
            avg_aoi_ms: 0.0,
            ccdf: Vec::new(),
            per_pair_rmse_ms: None,
            per_pair_mean_sigma2_ms2: None,
            fallback_slots: 0,
            refit_events: 0,
        }
    }
}

/// Slot-width CCDF grid from zero to `max_value`, with `threshold`
/// spliced in so the curve can be read off exactly at the violation point.
pub fn slot_grid(max_value: f64, tau_ms: f64, threshold: f64) -> Vec<f64> {
    let mut grid: Vec<f64> =
        (0..=(max_value / tau_ms).ceil() as usize).map(|i| i as f64 * tau_ms).collect();
    if !grid.iter().any(|x| *x == threshold) {
        grid.push(threshold);
        grid.sort_by(f64::total_cmp);
    }
    grid
}

/// Complementary CDF of the samples on the given ascending grid.
pub fn ccdf(samples: &[f64], grid: &[f64]) -> Result<Vec<(f64, f64)>, MetricsError> {
    if samples.is_empty() {
        return Err(MetricsError::NoSamples);
    }
    debug_assert!(grid.windows(2).all(|w| w[0] <= w[1]), "grid must be ascending");
    let n = samples.len() as f64;
    Ok(grid
        .iter()
        .map(|&x| (x, samples.iter().filter(|&&s| s > x).count() as f64 / n))
        .collect())
}

/// Fraction of samples strictly above the threshold.
pub fn violation_rate(samples: &[f64], threshold: f64) -> f64 {
    assert!(!samples.is_empty(), "violation rate of an empty sample set");
    samples.iter().filter(|&&s| s > threshold).count() as f64 / samples.len() as f64
}

/// Prediction RMSE for one pair over the slots `[warmup, last - 1]` where a
/// prediction was recorded, pairing each slot's predicted next-slot age
/// with the age observed at the next slot.
pub fn rmse(trace: &[SlotRecord], n_pairs: usize, pair: usize, warmup: u64) -> Result<f64, MetricsError> {
    let rows = trace.len() / n_pairs;
    let mut sum_sq = 0.0;
    let mut count = 0u64;
    for t in 0..rows.saturating_sub(1) {
        let row = &trace[t * n_pairs + pair];
        if row.slot < warmup {
            continue;
        }
        if let Some(mu) = row.mu_ms {
            let realized = trace[(t + 1) * n_pairs + pair].delta_ms;
            sum_sq += (mu - realized) * (mu - realized);
            count += 1;
        }
    }
    if count == 0 {
        return Err(MetricsError::NoPredictions(pair));
    }
    Ok((sum_sq / count as f64).sqrt())
}
