//! Slot loop orchestration.
//!
//! Each slot runs two phases. Phase 1: every agent decides its allocation
//! from slot-start knowledge only (their decisions cannot see each other
//! or the slot's channel draw). Phase 2: the environment resolves the
//! joint action profile -- gains, interference, rates, queue service, age
//! updates -- then moves vehicles and channel state forward one slot.

mod metrics;

pub use metrics::{ccdf, rmse, slot_grid, violation_rate, MetricsError, MetricsReport};

use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::alloc::{random_policy, ActionSpace, ActionSpaceError, Agent, AgentConfig, PowerAction};
use crate::config::{ConfigError, ScenarioConfig};
use crate::env::VehicularEnv;
use crate::gpr::Posterior;
use crate::link::{interference_at, transmission_rate, update_aoi, AoiState, PacketQueue};
use crate::rng::{domain, substream};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    ActionSpace(#[from] ActionSpaceError),
    #[error("environment setup failed: {0}")]
    Environment(String),
}

/// Allocation policy under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// GPR allocation with the configured exploration weight.
    Proposed,
    /// GPR allocation with the exploration weight forced to zero.
    Baseline2,
    /// Uniform random allocation, no learning.
    Baseline1,
}

impl Policy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Policy::Proposed => "proposed",
            Policy::Baseline2 => "baseline2",
            Policy::Baseline1 => "baseline1",
        }
    }

    pub const ALL: [Policy; 3] = [Policy::Proposed, Policy::Baseline2, Policy::Baseline1];
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proposed" => Ok(Policy::Proposed),
            "baseline2" => Ok(Policy::Baseline2),
            "baseline1" => Ok(Policy::Baseline1),
            other => Err(format!("unknown policy '{other}' (proposed|baseline2|baseline1)")),
        }
    }
}

/// One (slot, pair) observation row.
#[derive(Debug, Clone)]
pub struct SlotRecord {
    pub slot: u64,
    pub pair: usize,
    /// AoI at the beginning of the slot (ms).
    pub delta_ms: f64,
    /// Predicted next-slot AoI for the chosen action, when the policy predicts.
    pub mu_ms: Option<f64>,
    pub sigma2_ms2: Option<f64>,
    pub rate_pkts: f64,
    pub total_power_w: f64,
    pub delivered: bool,
    /// Interference (W) on each active RB, as (rb, power) pairs.
    pub interference_w: Vec<(usize, f64)>,
    pub fallback: bool,
    pub refit: bool,
}

/// Full output of one run.
pub struct SimOutput {
    pub trace: Vec<SlotRecord>,
    pub report: MetricsReport,
    /// AoI (ms) per pair at the end of the horizon.
    pub final_deltas_ms: Vec<f64>,
    /// Per-slot vehicle positions and own-link classes, when collected.
    pub env_trace: Vec<EnvRecord>,
}

/// One (slot, pair) environment observation for the optional export.
#[derive(Debug, Clone)]
pub struct EnvRecord {
    pub slot: u64,
    pub pair: usize,
    pub tx: (f64, f64),
    pub rx: (f64, f64),
    pub class: &'static str,
}

/// Run knobs outside the scenario file; defaults match production.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Evaluate phase-1 decisions in reverse pair order. Output must not
    /// change: decisions are independent within a slot.
    pub reverse_decision_order: bool,
    /// Record per-slot vehicle positions and link classes.
    pub collect_env_trace: bool,
}

pub fn run_simulation(cfg: &ScenarioConfig, policy: Policy) -> Result<SimOutput, SimError> {
    run_simulation_with(cfg, policy, RunOptions::default())
}

enum Decider {
    Learners(Vec<Agent>),
    Random(Vec<ChaCha12Rng>),
}

pub fn run_simulation_with(
    cfg: &ScenarioConfig,
    policy: Policy,
    options: RunOptions,
) -> Result<SimOutput, SimError> {
    let horizon = cfg.run.horizon;
    if horizon == 0 {
        return Ok(SimOutput {
            trace: Vec::new(),
            report: MetricsReport::empty(policy.as_str(), cfg.run.seed, cfg.warmup_slots()),
            final_deltas_ms: Vec::new(),
            env_trace: Vec::new(),
        });
    }
    cfg.validate()?;

    let k = cfg.radio.pairs;
    let n = cfg.radio.rbs;
    let seed = cfg.run.seed;
    let tau = cfg.radio.slot_s;
    let arrival = cfg.arrival_packets_per_slot();

    let space = ActionSpace::build(
        n,
        cfg.radio.power_levels,
        cfg.radio.rb_power_w,
        cfg.radio.total_power_w,
        cfg.learning.candidate_cap,
        cfg.learning.force_exhaustive,
    )?;
    let mut env = VehicularEnv::new(seed, k, n, cfg.channel, cfg.mobility, tau)
        .map_err(SimError::Environment)?;

    let alpha_i = match policy {
        Policy::Baseline2 => 0.0,
        _ => cfg.learning.alpha_i,
    };
    let agent_cfg = AgentConfig {
        alpha_c: cfg.learning.alpha_c,
        alpha_i,
        threshold_ms: cfg.threshold_ms(),
        refit_period: cfg.learning.refit_period,
        min_fit_samples: cfg.learning.min_fit_samples,
        gpr: cfg.gpr_options(),
        fit: cfg.fit_options(),
        fit_bound_ratio: cfg.learning.fit_bound_ratio,
    };

    let mut decider = match policy {
        Policy::Baseline1 => {
            Decider::Random((0..k).map(|i| substream(seed, domain::BASELINE, i as u64)).collect())
        }
        _ => Decider::Learners(
            (0..k)
                .map(|i| {
                    Agent::init(
                        cfg.learning.window,
                        cfg.initial_kernel(),
                        cfg.normalizer(),
                        agent_cfg,
                        &space,
                        substream(seed, domain::AGENT, i as u64),
                    )
                })
                .collect(),
        ),
    };

    // First-slot actions: learners start from their random initial action,
    // the random baseline draws fresh.
    let mut actions: Vec<PowerAction> = match &mut decider {
        Decider::Learners(agents) => agents.iter().map(|a| a.last_action().clone()).collect(),
        Decider::Random(rngs) => rngs.iter_mut().map(|r| random_policy(&space, r)).collect(),
    };
    let mut posteriors: Vec<Option<Posterior>> = vec![None; k];
    let mut flags: Vec<(bool, bool)> = vec![(false, false); k];

    let mut queues: Vec<PacketQueue> = (0..k)
        .map(|_| PacketQueue::with_policy(cfg.traffic.packet_bits, cfg.traffic.supersede))
        .collect();
    let mut ages: Vec<AoiState> = vec![AoiState::default(); k];
    let mut trace: Vec<SlotRecord> = Vec::with_capacity((horizon as usize).saturating_mul(k));
    let mut env_trace: Vec<EnvRecord> = Vec::new();

    let pool = (cfg.run.threads > 1)
        .then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.run.threads)
                .build()
                .expect("thread pool")
        });

    for t in 0..horizon {
        if t > 0 {
            // Phase 1: decide from slot-start state only.
            match &mut decider {
                Decider::Random(rngs) => {
                    for (i, rng) in rngs.iter_mut().enumerate() {
                        actions[i] = random_policy(&space, rng);
                    }
                }
                Decider::Learners(agents) => {
                    let deltas_ms: Vec<f64> = ages.iter().map(|a| a.delta_s * 1e3).collect();
                    let step = |(i, agent): (usize, &mut Agent)| {
                        let out = agent.step(deltas_ms[i], &space);
                        (i, agent.last_action().clone(), out)
                    };
                    let results: Vec<(usize, PowerAction, crate::alloc::StepOutcome)> =
                        match &pool {
                            Some(pool) => pool.install(|| {
                                agents.par_iter_mut().enumerate().map(step).collect()
                            }),
                            None => {
                                if options.reverse_decision_order {
                                    agents.iter_mut().enumerate().rev().map(step).collect()
                                } else {
                                    agents.iter_mut().enumerate().map(step).collect()
                                }
                            }
                        };
                    for (i, action, out) in results {
                        actions[i] = action;
                        posteriors[i] = out.posterior;
                        flags[i] = (out.fallback, out.refit);
                    }
                }
            }
        }

        // Phase 2: resolve the joint action profile against the environment.
        if options.collect_env_trace {
            for (pair, state) in env.pairs().iter().enumerate() {
                env_trace.push(EnvRecord {
                    slot: t,
                    pair,
                    tx: state.tx,
                    rx: state.rx,
                    class: env.own_link_class(pair).as_str(),
                });
            }
        }
        let gains = env.gains();
        let actions_w: Vec<Vec<f64>> = actions.iter().map(|a| a.watts().to_vec()).collect();
        for pair in 0..k {
            let interference: Vec<f64> =
                (0..n).map(|rb| interference_at(pair, rb, &actions_w, &gains)).collect();
            let rate = transmission_rate(
                &actions_w[pair],
                &gains[pair][pair],
                &interference,
                cfg.radio.rb_bandwidth_hz,
                cfg.radio.noise_psd_w_hz,
                tau,
                cfg.traffic.packet_bits,
            );
            let (delivered_gen, _) = queues[pair].serve(rate, arrival, t);
            let delta_before = ages[pair].delta_s;
            ages[pair] = update_aoi(&ages[pair], delivered_gen, t, tau);

            trace.push(SlotRecord {
                slot: t,
                pair,
                delta_ms: delta_before * 1e3,
                mu_ms: posteriors[pair].map(|p| p.mean),
                sigma2_ms2: posteriors[pair].map(|p| p.variance),
                rate_pkts: rate,
                total_power_w: actions[pair].total_watts(),
                delivered: delivered_gen.is_some(),
                interference_w: actions[pair]
                    .active_rbs()
                    .map(|rb| (rb, interference[rb]))
                    .collect(),
                fallback: flags[pair].0,
                refit: flags[pair].1,
            });
        }
        env.advance();
    }

    let report = build_report(cfg, policy, &trace, k);
    let final_deltas_ms = ages.iter().map(|a| a.delta_s * 1e3).collect();
    Ok(SimOutput { trace, report, final_deltas_ms, env_trace })
}

fn build_report(
    cfg: &ScenarioConfig,
    policy: Policy,
    trace: &[SlotRecord],
    n_pairs: usize,
) -> MetricsReport {
    let warmup = cfg.warmup_slots();
    let pooled: Vec<f64> =
        trace.iter().filter(|r| r.slot >= warmup).map(|r| r.delta_ms).collect();
    if pooled.is_empty() {
        return MetricsReport::empty(policy.as_str(), cfg.run.seed, warmup);
    }

    let tau_ms = cfg.radio.slot_s * 1e3;
    let threshold_ms = cfg.threshold_ms();
    let max_delta = pooled.iter().cloned().fold(0.0_f64, f64::max);
    let grid = metrics::slot_grid(max_delta, tau_ms, threshold_ms);
    let curve = ccdf(&pooled, &grid).expect("pooled samples are non-empty");

    let predicts = policy != Policy::Baseline1;
    let per_pair_rmse_ms = predicts.then(|| {
        (0..n_pairs)
            .map(|pair| rmse(trace, n_pairs, pair, warmup).unwrap_or(f64::NAN))
            .collect()
    });
    let per_pair_mean_sigma2_ms2 = predicts.then(|| {
        (0..n_pairs)
            .map(|pair| {
                let (mut sum, mut count) = (0.0, 0u64);
                for r in trace.iter().filter(|r| r.pair == pair && r.slot >= warmup) {
                    if let Some(s2) = r.sigma2_ms2 {
                        sum += s2;
                        count += 1;
                    }
                }
                if count > 0 { sum / count as f64 } else { f64::NAN }
            })
            .collect()
    });

    MetricsReport {
        policy: policy.as_str().to_string(),
        seed: cfg.run.seed,
        warmup_slots: warmup,
        pooled_slots: pooled.len() as u64 / n_pairs as u64,
        violation_prob: violation_rate(&pooled, threshold_ms),
        avg_aoi_ms: pooled.iter().sum::<f64>() / pooled.len() as f64,
        ccdf: curve,
        per_pair_rmse_ms,
        per_pair_mean_sigma2_ms2,
        fallback_slots: trace.iter().filter(|r| r.fallback).count() as u64,
        refit_events: trace.iter().filter(|r| r.refit).count() as u64,
    }
}
