//! Per-agent decision making: the violation-probability objective over the
//! GPR posterior and the online learn-then-act loop each agent runs once
//! per slot.


use rand_chacha::ChaCha12Rng;

use super::action::{ActionSpace, PowerAction};
use crate::gpr::{
    fit_hyperparams, prior_posterior, FitBounds, FitOptions, GprError, GprModel, GprOptions,
    KernelHyperparams, Posterior, Sample, SlidingDataset,
};

/// Probability that a Gaussian (mu, sigma2) exceeds the threshold `d`.
///
/// The degenerate sigma2 = 0 case is the step function, with 1/2 exactly
/// at mu = d.
pub fn violation_probability(mu: f64, sigma2: f64, d: f64) -> f64 {
    debug_assert!(sigma2 >= 0.0);
    if sigma2 > 0.0 {
        0.5 * libm::erfc((d - mu) / (2.0 * sigma2).sqrt())
    } else if mu > d {
        1.0
    } else if mu < d {
        0.0
    } else {
        0.5
    }
}

/// Exploitation-exploration score to minimize:
/// `alpha_c * Pr{violation} - alpha_i * sigma2`.
pub fn acquisition(mu: f64, sigma2: f64, alpha_c: f64, alpha_i: f64, d: f64) -> f64 {
    alpha_c * violation_probability(mu, sigma2, d) - alpha_i * sigma2
}

/// Scales raw (AoI ms, per-RB watts) into the dimensionless kernel inputs.
#[derive(Debug, Clone, Copy)]
pub struct InputNormalizer {
    pub aoi_scale_ms: f64,
    pub power_scale_w: f64,
}

impl InputNormalizer {
    pub fn input(&self, delta_ms: f64, action: &PowerAction) -> Vec<f64> {
        let mut x = Vec::with_capacity(1 + action.watts().len());
        x.push(delta_ms / self.aoi_scale_ms);
        x.extend(action.watts().iter().map(|w| w / self.power_scale_w));
        x
    }
}

/// Learning-loop knobs fixed per run.
#[derive(Debug, Clone, Copy)]
pub struct AgentConfig {
    pub alpha_c: f64,
    pub alpha_i: f64,
    /// AoI threshold in the learning unit (ms).
    pub threshold_ms: f64,
    /// Slots between hyperparameter refits.
    pub refit_period: u32,
    /// Smallest window eligible for refitting.
    pub min_fit_samples: usize,
    pub gpr: GprOptions,
    pub fit: FitOptions,
    /// Each fitted parameter may move this factor away from its initial value.
    pub fit_bound_ratio: f64,
}

/// Per-slot observability of one decision.
#[derive(Debug, Clone, Copy)]
pub struct StepOutcome {
    /// Posterior of the chosen action, absent on a singular-kernel fallback.
    pub posterior: Option<Posterior>,
    /// The slot reused the previous action because the kernel was singular.
    pub fallback: bool,
    /// Hyperparameters were refit this slot.
    pub refit: bool,
    /// The refit found no factorizable candidate at all.
    pub fit_warning: bool,
}

/// One decentralized learner: sliding window, kernel state, and the last
/// state-action pair awaiting its observed outcome.
pub struct Agent {
    dataset: SlidingDataset,
    theta: KernelHyperparams,
    norm: InputNormalizer,
    cfg: AgentConfig,
    last_action: PowerAction,
    last_delta_ms: f64,
    slots_since_refit: u32,
    rng: ChaCha12Rng,
}

impl Agent {
    /// Initialize at t = 0: zero age, empty window, random first action.
    pub fn init(
        window: usize,
        theta: KernelHyperparams,
        norm: InputNormalizer,
        cfg: AgentConfig,
        space: &ActionSpace,
        mut rng: ChaCha12Rng,
    ) -> Self {
        let first_action = space.sample_uniform(&mut rng);
        Self {
            dataset: SlidingDataset::new(window),
            theta,
            norm,
            cfg,
            last_action: first_action,
            last_delta_ms: 0.0,
            slots_since_refit: 0,
            rng,
        }
    }

    pub fn last_action(&self) -> &PowerAction {
        &self.last_action
    }

    pub fn window_len(&self) -> usize {
        self.dataset.len()
    }

    pub fn theta(&self) -> &KernelHyperparams {
        &self.theta
    }

    /// One slot of the online loop: record the observed transition, refit
    /// on schedule, score every candidate, and commit to the minimizer.
    ///
    /// Returns the action for this slot; on a singular kernel the previous
    /// action is repeated and the slot is flagged rather than failed.
    pub fn step(&mut self, observed_delta_ms: f64, space: &ActionSpace) -> StepOutcome {
        let x = self.norm.input(self.last_delta_ms, &self.last_action);
        self.dataset.push(Sample { x, y: observed_delta_ms });
        self.slots_since_refit += 1;

        let mut refit = false;
        let mut fit_warning = false;
        if self.slots_since_refit >= self.cfg.refit_period
            && self.dataset.len() >= self.cfg.min_fit_samples
        {
            let bounds = FitBounds::around(&self.theta, self.cfg.fit_bound_ratio);
            let report = fit_hyperparams(
                &self.dataset,
                &self.theta,
                &bounds,
                self.cfg.gpr,
                &self.cfg.fit,
                &mut self.rng,
            );
            self.theta = report.theta;
            fit_warning = report.all_singular;
            refit = true;
            self.slots_since_refit = 0;
        }

        let outcome = match GprModel::factorize(&self.dataset, &self.theta, self.cfg.gpr) {
            Ok(model) => {
                let candidates = space.candidates(&mut self.rng, Some(&self.last_action));
                let (index, posterior) = select_action(
                    Some(&model),
                    &self.theta,
                    &self.norm,
                    observed_delta_ms,
                    &candidates,
                    self.cfg.alpha_c,
                    self.cfg.alpha_i,
                    self.cfg.threshold_ms,
                );
                self.last_action = candidates[index].clone();
                StepOutcome { posterior: Some(posterior), fallback: false, refit, fit_warning }
            }
            Err(GprError::SingularKernel { .. }) => {
                // Keep transmitting what worked before; the trace flags it.
                StepOutcome { posterior: None, fallback: true, refit, fit_warning }
            }
            Err(e) => unreachable!("agent kernel state is validated at startup: {e}"),
        };
        self.last_delta_ms = observed_delta_ms;
        outcome
    }
}

/// Score every candidate under the posterior and return the index of the
/// acquisition minimizer plus its posterior.
///
/// Ties break toward lower total power, then lexicographically smaller
/// level vectors, so the choice is deterministic and frugal. Without a
/// model every candidate shares the prior and the tie-break alone decides.
#[allow(clippy::too_many_arguments)]
pub fn select_action(
    model: Option<&GprModel>,
    theta: &KernelHyperparams,
    norm: &InputNormalizer,
    delta_ms: f64,
    candidates: &[PowerAction],
    alpha_c: f64,
    alpha_i: f64,
    threshold_ms: f64,
) -> (usize, Posterior) {
    assert!(!candidates.is_empty());
    let posteriors: Vec<Posterior> = match model {
        Some(m) => {
            let queries: Vec<Vec<f64>> =
                candidates.iter().map(|c| norm.input(delta_ms, c)).collect();
            m.predict_batch(&queries)
        }
        None => vec![prior_posterior(theta); candidates.len()],
    };

    let mut best: Option<(f64, usize)> = None;
    for (i, p) in posteriors.iter().enumerate() {
        let score = acquisition(p.mean, p.variance, alpha_c, alpha_i, threshold_ms);
        if !score.is_finite() {
            continue;
        }
        let better = match best {
            None => true,
            Some((best_score, best_idx)) => {
                score < best_score
                    || (score == best_score
                        && (candidates[i].total_watts() < candidates[best_idx].total_watts()
                            || (candidates[i].total_watts() == candidates[best_idx].total_watts()
                                && candidates[i].levels() < candidates[best_idx].levels())))
            }
        };
        if better {
            best = Some((score, i));
        }
    }
    let (_, index) = best.expect("at least one finite acquisition value");
    (index, posteriors[index])
}

/// Baseline policy: a fresh uniform draw over the feasible set each slot.
pub fn random_policy(space: &ActionSpace, rng: &mut ChaCha12Rng) -> PowerAction {
    space.sample_uniform(rng)
}
