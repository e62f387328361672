//! Quantized per-RB power vectors under a total budget, and the candidate
//! sets agents optimize over.
//!
//! Per-RB power takes one of L+1 levels {0, p/L, ..., p} and the vector
//! must satisfy sum <= P_max. The whole feasible set is enumerated when it
//! fits under the candidate cap; otherwise candidates are sampled
//! uniformly without replacement each decision via lexicographic
//! unranking, always re-including the zero action and the agent's
//! previous action.

use std::borrow::Cow;
use std::collections::BTreeSet;

use rand::RngExt;
use rand_chacha::ChaCha12Rng;

#[derive(Debug, thiserror::Error)]
pub enum ActionSpaceError {
    #[error("invalid action-space parameters: {0}")]
    InvalidParams(String),
    #[error("feasible set too large to index ({0} actions overflow the counter)")]
    CountOverflow(String),
    #[error("exhaustive enumeration of {total} actions exceeds the {limit} limit")]
    ExhaustiveTooLarge { total: u128, limit: usize },
}

/// One power allocation: per-RB quantization levels with the watt values
/// they denote.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAction {
    levels: Vec<u16>,
    watts: Vec<f64>,
    total_w: f64,
}

impl PowerAction {
    fn from_levels(levels: Vec<u16>, step_w: f64) -> Self {
        let watts: Vec<f64> = levels.iter().map(|&l| l as f64 * step_w).collect();
        let total_w = watts.iter().sum();
        Self { levels, watts, total_w }
    }

    pub fn levels(&self) -> &[u16] {
        &self.levels
    }

    pub fn watts(&self) -> &[f64] {
        &self.watts
    }

    pub fn total_watts(&self) -> f64 {
        self.total_w
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|&l| l == 0)
    }

    /// Active (positive-power) RB indices.
    pub fn active_rbs(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().enumerate().filter(|(_, &l)| l > 0).map(|(i, _)| i)
    }
}

/// The feasible allocation set, exhaustive or sampled.
#[derive(Debug, Clone)]
pub struct ActionSpace {
    n_rbs: usize,
    levels: u16,
    step_w: f64,
    budget_levels: u32,
    cap: usize,
    total: u128,
    /// suffix_counts[pos][b]: completions of positions pos.. with budget b.
    suffix_counts: Vec<Vec<u128>>,
    exhaustive: Option<Vec<PowerAction>>,
}

/// Hard limit on materializing an exhaustive candidate list.
const EXHAUSTIVE_LIMIT: usize = 1 << 20;

impl ActionSpace {
    /// Build the space for `n_rbs` RBs with `levels` positive power levels
    /// per RB (L), per-RB maximum `rb_power_w` and budget `total_power_w`.
    ///
    /// The set is enumerated when its size fits under `cap` (or when
    /// `force_exhaustive` demands it); otherwise it stays implicit and
    /// candidates are sampled per decision.
    pub fn build(
        n_rbs: usize,
        levels: u16,
        rb_power_w: f64,
        total_power_w: f64,
        cap: usize,
        force_exhaustive: bool,
    ) -> Result<Self, ActionSpaceError> {
        if n_rbs == 0 || levels == 0 || rb_power_w <= 0.0 || total_power_w <= 0.0 {
            return Err(ActionSpaceError::InvalidParams(format!(
                "n_rbs {n_rbs}, levels {levels}, rb_power_w {rb_power_w}, total_power_w {total_power_w}"
            )));
        }
        if cap < 2 {
            return Err(ActionSpaceError::InvalidParams("candidate cap must be at least 2".into()));
        }
        let step_w = rb_power_w / levels as f64;
        // Largest level sum whose power stays within the budget, with a
        // relative tolerance so an exact-boundary budget is admitted.
        let mut budget_levels = ((total_power_w / step_w) * (1.0 + 1e-9)).floor() as u32;
        budget_levels = budget_levels.min(n_rbs as u32 * levels as u32);

        let suffix_counts = suffix_counts(n_rbs, levels, budget_levels)
            .ok_or_else(|| ActionSpaceError::CountOverflow(format!("N={n_rbs}, L={levels}")))?;
        let total = suffix_counts[0][budget_levels as usize];

        let mut space = Self {
            n_rbs,
            levels,
            step_w,
            budget_levels,
            cap,
            total,
            suffix_counts,
            exhaustive: None,
        };
        if total <= cap as u128 || force_exhaustive {
            if total > EXHAUSTIVE_LIMIT as u128 {
                return Err(ActionSpaceError::ExhaustiveTooLarge { total, limit: EXHAUSTIVE_LIMIT });
            }
            let list = (0..total).map(|r| space.unrank(r)).collect();
            space.exhaustive = Some(list);
        }
        Ok(space)
    }

    pub fn feasible_count(&self) -> u128 {
        self.total
    }

    pub fn is_exhaustive(&self) -> bool {
        self.exhaustive.is_some()
    }

    pub fn n_rbs(&self) -> usize {
        self.n_rbs
    }

    pub fn rb_power_w(&self) -> f64 {
        self.step_w * self.levels as f64
    }

    /// All actions, when enumerated.
    pub fn actions(&self) -> Option<&[PowerAction]> {
        self.exhaustive.as_deref()
    }

    pub fn zero_action(&self) -> PowerAction {
        PowerAction::from_levels(vec![0; self.n_rbs], self.step_w)
    }

    /// Whether an action belongs to this space (level grid and budget).
    pub fn contains(&self, action: &PowerAction) -> bool {
        action.levels.len() == self.n_rbs
            && action.levels.iter().all(|&l| l <= self.levels)
            && action.levels.iter().map(|&l| l as u32).sum::<u32>() <= self.budget_levels
    }

    /// Lexicographic index of the feasible action at `rank`.
    fn unrank(&self, mut rank: u128) -> PowerAction {
        debug_assert!(rank < self.total);
        let mut levels = Vec::with_capacity(self.n_rbs);
        let mut budget = self.budget_levels;
        for pos in 0..self.n_rbs {
            for level in 0..=self.levels.min(budget as u16) {
                let count = self.suffix_counts[pos + 1][(budget - level as u32) as usize];
                if rank < count {
                    levels.push(level);
                    budget -= level as u32;
                    break;
                }
                rank -= count;
            }
        }
        debug_assert_eq!(levels.len(), self.n_rbs);
        PowerAction::from_levels(levels, self.step_w)
    }

    /// Inverse of `unrank`.
    fn rank(&self, action: &PowerAction) -> u128 {
        debug_assert!(self.contains(action));
        let mut rank = 0u128;
        let mut budget = self.budget_levels;
        for (pos, &chosen) in action.levels.iter().enumerate() {
            for level in 0..chosen {
                rank += self.suffix_counts[pos + 1][(budget - level as u32) as usize];
            }
            budget -= chosen as u32;
        }
        rank
    }

    /// Uniform draw over the whole feasible set.
    pub fn sample_uniform(&self, rng: &mut ChaCha12Rng) -> PowerAction {
        self.unrank(rng.random_range(0..self.total))
    }

    /// Candidate set for one decision. Exhaustive mode exposes the full
    /// list; sampled mode draws `cap` distinct actions including the zero
    /// action and the previous one.
    pub fn candidates(
        &self,
        rng: &mut ChaCha12Rng,
        previous: Option<&PowerAction>,
    ) -> Cow<'_, [PowerAction]> {
        if let Some(list) = &self.exhaustive {
            return Cow::Borrowed(list);
        }
        let want = (self.cap as u128).min(self.total) as usize;
        let mut ranks = BTreeSet::new();
        ranks.insert(0u128); // the zero action ranks first lexicographically
        if let Some(prev) = previous {
            ranks.insert(self.rank(prev));
        }
        if self.total <= 4 * want as u128 {
            // Dense regime: partial Fisher-Yates over the explicit index list.
            let mut all: Vec<u128> = (0..self.total).collect();
            let mut i = 0usize;
            while ranks.len() < want {
                let j = rng.random_range(i..all.len());
                all.swap(i, j);
                ranks.insert(all[i]);
                i += 1;
            }
        } else {
            while ranks.len() < want {
                ranks.insert(rng.random_range(0..self.total));
            }
        }
        Cow::Owned(ranks.into_iter().map(|r| self.unrank(r)).collect())
    }
}

/// DP table of completion counts; `None` on overflow.
fn suffix_counts(n_rbs: usize, levels: u16, budget: u32) -> Option<Vec<Vec<u128>>> {
    let b = budget as usize;
    let mut table = vec![vec![0u128; b + 1]; n_rbs + 1];
    table[n_rbs] = vec![1u128; b + 1];
    for pos in (0..n_rbs).rev() {
        for rem in 0..=b {
            let mut acc: u128 = 0;
            for level in 0..=(levels as usize).min(rem) {
                acc = acc.checked_add(table[pos + 1][rem - level])?;
            }
            table[pos][rem] = acc;
        }
    }
    Some(table)
}
