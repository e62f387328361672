//! Command implementations behind the `agesim` binary: single runs, the
//! three-policy comparison, and the window / exploration-weight sweeps.
//!
//! Every command resolves and validates its configuration up front, runs
//! entirely in memory, and only then writes its output directory, so a bad
//! configuration never leaves partial outputs. All emitted files are listed
//! in `manifest.json` with a content checksum.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::engine::{run_simulation_with, MetricsReport, Policy, RunOptions, SimOutput};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input (config, flags); maps to exit code 1.
    #[error("{0}")]
    Validation(String),
    /// Failure during execution or output; maps to exit code 2.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<crate::engine::SimError> for CliError {
    fn from(e: crate::engine::SimError) -> Self {
        match e {
            crate::engine::SimError::Config(c) => CliError::Validation(c.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl clap::ValueEnum for Policy {
    fn value_variants<'a>() -> &'a [Self] {
        &Policy::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.as_str()))
    }
}

/// Candidate-set override from the command line: `exhaustive` or a cap.
pub fn apply_candidate_override(cfg: &mut ScenarioConfig, value: &str) -> Result<(), CliError> {
    if value == "exhaustive" {
        cfg.learning.force_exhaustive = true;
        return Ok(());
    }
    let cap: usize = value
        .parse()
        .map_err(|_| CliError::Validation(format!("--candidates must be 'exhaustive' or a number, got '{value}'")))?;
    if cap < 2 {
        return Err(CliError::Validation("--candidates cap must be at least 2".into()));
    }
    cfg.learning.candidate_cap = cap;
    cfg.learning.force_exhaustive = false;
    Ok(())
}

/// Resolve the seed list: explicit seeds win, otherwise the config's seed.
pub fn resolve_seeds(cfg: &ScenarioConfig, seeds: &[u64]) -> Vec<u64> {
    if seeds.is_empty() {
        vec![cfg.run.seed]
    } else {
        seeds.to_vec()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

#[derive(Serialize)]
struct ManifestFile {
    name: String,
    bytes: usize,
    checksum_fnv1a64: String,
}

/// Reproducibility record written next to every output set.
#[derive(Serialize)]
pub struct RunManifest {
    version: String,
    command: String,
    config_toml: String,
    seeds: Vec<u64>,
    policies: Vec<String>,
    out_dir: String,
    wall_ms: u128,
    files: Vec<ManifestFile>,
}

/// In-memory output set, written atomically at the end of a command.
struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    fn new() -> Self {
        Self { files: Vec::new() }
    }

    fn add(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), contents.into()));
    }

    fn write(
        mut self,
        out_dir: &Path,
        command: &str,
        cfg: &ScenarioConfig,
        seeds: &[u64],
        policies: &[Policy],
        started: Instant,
    ) -> Result<(), CliError> {
        let manifest = RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_toml: cfg.to_toml_string(),
            seeds: seeds.to_vec(),
            policies: policies.iter().map(|p| p.as_str().to_string()).collect(),
            out_dir: out_dir.display().to_string(),
            wall_ms: started.elapsed().as_millis(),
            files: self
                .files
                .iter()
                .map(|(name, bytes)| ManifestFile {
                    name: name.clone(),
                    bytes: bytes.len(),
                    checksum_fnv1a64: format!("{:016x}", fnv1a64(bytes)),
                })
                .collect(),
        };
        let manifest_json = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
        self.files.push(("manifest.json".to_string(), manifest_json));

        std::fs::create_dir_all(out_dir)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
        for (name, bytes) in &self.files {
            let path = out_dir.join(name);
            std::fs::write(&path, bytes)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn trace_csv(output: &SimOutput) -> String {
    let mut s = String::from("slot,pair,delta_ms,mu_ms,sigma2_ms2,rate_pkts,total_power_w,delivered,flags\n");
    for r in &output.trace {
        let mu = r.mu_ms.map(|v| v.to_string()).unwrap_or_default();
        let s2 = r.sigma2_ms2.map(|v| v.to_string()).unwrap_or_default();
        let mut flags = String::new();
        if r.fallback {
            flags.push_str("fallback");
        }
        if r.refit {
            if !flags.is_empty() {
                flags.push(';');
            }
            flags.push_str("refit");
        }
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.slot,
            r.pair,
            r.delta_ms,
            mu,
            s2,
            r.rate_pkts,
            r.total_power_w,
            u8::from(r.delivered),
            flags
        )
        .expect("string write");
    }
    s
}

fn ccdf_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("threshold_ms,ccdf\n");
    for (x, p) in points {
        writeln!(s, "{x},{p}").expect("string write");
    }
    s
}

/// Pool post-warmup AoI samples of several runs onto one slot-width CCDF grid.
fn pooled_ccdf(cfg: &ScenarioConfig, outputs: &[SimOutput]) -> Vec<(f64, f64)> {
    let warmup = cfg.warmup_slots();
    let samples: Vec<f64> = outputs
        .iter()
        .flat_map(|o| o.trace.iter().filter(|r| r.slot >= warmup).map(|r| r.delta_ms))
        .collect();
    if samples.is_empty() {
        return Vec::new();
    }
    let tau_ms = cfg.radio.slot_s * 1e3;
    let max = samples.iter().cloned().fold(0.0_f64, f64::max);
    let grid = crate::engine::slot_grid(max, tau_ms, cfg.threshold_ms());
    crate::engine::ccdf(&samples, &grid).expect("non-empty samples")
}

#[derive(Serialize)]
struct PooledMetrics {
    policy: String,
    seeds: Vec<u64>,
    warmup_slots: u64,
    samples: usize,
    violation_prob: f64,
    avg_aoi_ms: f64,
}

#[derive(Serialize)]
struct RunMetricsDoc {
    pooled: PooledMetrics,
    per_seed: Vec<MetricsReport>,
}

fn pooled_metrics(cfg: &ScenarioConfig, policy: Policy, seeds: &[u64], outputs: &[SimOutput]) -> PooledMetrics {
    let warmup = cfg.warmup_slots();
    let samples: Vec<f64> = outputs
        .iter()
        .flat_map(|o| o.trace.iter().filter(|r| r.slot >= warmup).map(|r| r.delta_ms))
        .collect();
    let (violation_prob, avg_aoi_ms) = if samples.is_empty() {
        (0.0, 0.0)
    } else {
        (
            crate::engine::violation_rate(&samples, cfg.threshold_ms()),
            samples.iter().sum::<f64>() / samples.len() as f64,
        )
    };
    PooledMetrics {
        policy: policy.as_str().to_string(),
        seeds: seeds.to_vec(),
        warmup_slots: warmup,
        samples: samples.len(),
        violation_prob,
        avg_aoi_ms,
    }
}

fn run_seeds(
    cfg: &ScenarioConfig,
    policy: Policy,
    seeds: &[u64],
    options: RunOptions,
) -> Result<Vec<SimOutput>, CliError> {
    seeds
        .iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.run.seed = seed;
            run_simulation_with(&c, policy, options).map_err(CliError::from)
        })
        .collect()
}

fn env_trace_csv(output: &SimOutput) -> String {
    let mut s = String::from("slot,pair,tx_x,tx_y,rx_x,rx_y,class\n");
    for r in &output.env_trace {
        writeln!(s, "{},{},{},{},{},{},{}", r.slot, r.pair, r.tx.0, r.tx.1, r.rx.0, r.rx.1, r.class)
            .expect("string write");
    }
    s
}

/// Run one policy over the seed list; emit metrics.json, ccdf.csv,
/// optional trace files, and the manifest.
pub fn cmd_run(
    cfg: &ScenarioConfig,
    policy: Policy,
    seeds: &[u64],
    out_dir: &Path,
    write_trace: bool,
) -> Result<(), CliError> {
    cmd_run_with(cfg, policy, seeds, out_dir, write_trace, false)
}

/// `cmd_run` with the optional environment trace (per-slot positions and
/// own-link classes).
pub fn cmd_run_with(
    cfg: &ScenarioConfig,
    policy: Policy,
    seeds: &[u64],
    out_dir: &Path,
    write_trace: bool,
    write_env_trace: bool,
) -> Result<(), CliError> {
    let started = Instant::now();
    cfg.validate()?;
    let seeds = resolve_seeds(cfg, seeds);
    let options = RunOptions { collect_env_trace: write_env_trace, ..RunOptions::default() };
    let outputs = run_seeds(cfg, policy, &seeds, options)?;

    let mut set = OutputSet::new();
    set.add("ccdf.csv", ccdf_csv(&pooled_ccdf(cfg, &outputs)));
    let doc = RunMetricsDoc {
        pooled: pooled_metrics(cfg, policy, &seeds, &outputs),
        per_seed: outputs.iter().map(|o| o.report.clone()).collect(),
    };
    set.add(
        "metrics.json",
        serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Runtime(e.to_string()))?,
    );
    if write_trace {
        if seeds.len() == 1 {
            set.add("trace.csv", trace_csv(&outputs[0]));
        } else {
            for (seed, output) in seeds.iter().zip(&outputs) {
                set.add(&format!("trace_seed{seed}.csv"), trace_csv(output));
            }
        }
    }
    if write_env_trace {
        if seeds.len() == 1 {
            set.add("env_trace.csv", env_trace_csv(&outputs[0]));
        } else {
            for (seed, output) in seeds.iter().zip(&outputs) {
                set.add(&format!("env_trace_seed{seed}.csv"), env_trace_csv(output));
            }
        }
    }
    println!(
        "run policy={} seeds={:?} violation={:.6} avg_aoi_ms={:.3}",
        policy.as_str(),
        seeds,
        doc.pooled.violation_prob,
        doc.pooled.avg_aoi_ms
    );
    set.write(out_dir, "run", cfg, &seeds, &[policy], started)
}

#[derive(Serialize)]
struct CompareSummary {
    per_policy_violation: Vec<(String, f64)>,
    per_policy_avg_aoi_ms: Vec<(String, f64)>,
    /// Fig.-2-style ordering check: proposed at most baseline1.
    proposed_le_baseline1: bool,
    /// Full ordering proposed <= baseline2 <= baseline1.
    full_ordering_holds: bool,
}

/// Run all three policies per seed and emit the joined comparison.
pub fn cmd_compare(cfg: &ScenarioConfig, seeds: &[u64], out_dir: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    cfg.validate()?;
    let seeds = resolve_seeds(cfg, seeds);

    let mut csv = String::from("policy,seed,violation_prob,avg_aoi_ms\n");
    let mut pooled_violation = Vec::new();
    let mut pooled_avg = Vec::new();
    for policy in Policy::ALL {
        let outputs = run_seeds(cfg, policy, &seeds, RunOptions::default())?;
        let pooled = pooled_metrics(cfg, policy, &seeds, &outputs);
        for (seed, output) in seeds.iter().zip(&outputs) {
            writeln!(
                csv,
                "{},{},{},{}",
                policy.as_str(),
                seed,
                output.report.violation_prob,
                output.report.avg_aoi_ms
            )
            .expect("string write");
        }
        pooled_violation.push((policy.as_str().to_string(), pooled.violation_prob));
        pooled_avg.push((policy.as_str().to_string(), pooled.avg_aoi_ms));
    }

    let v = |name: &str| pooled_violation.iter().find(|(n, _)| n == name).map(|(_, v)| *v).unwrap();
    let summary = CompareSummary {
        proposed_le_baseline1: v("proposed") <= v("baseline1"),
        full_ordering_holds: v("proposed") <= v("baseline2") && v("baseline2") <= v("baseline1"),
        per_policy_violation: pooled_violation,
        per_policy_avg_aoi_ms: pooled_avg,
    };
    println!(
        "compare seeds={:?} proposed<=baseline1: {}",
        seeds, summary.proposed_le_baseline1
    );

    let mut set = OutputSet::new();
    set.add("comparison.csv", csv);
    set.add(
        "summary.json",
        serde_json::to_vec_pretty(&summary).map_err(|e| CliError::Runtime(e.to_string()))?,
    );
    set.write(out_dir, "compare", cfg, &seeds, &Policy::ALL, started)
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn mean_rmse(report: &MetricsReport) -> f64 {
    match &report.per_pair_rmse_ms {
        Some(rs) if !rs.is_empty() => rs.iter().sum::<f64>() / rs.len() as f64,
        _ => f64::NAN,
    }
}

/// Window-size sweep under the pure-exploitation policy: per-cell rows and
/// the across-seed summary. All cells share one warmup so their pooled
/// windows are comparable.
pub fn cmd_sweep_m(
    cfg: &ScenarioConfig,
    m_list: &[usize],
    seeds: &[u64],
    out_dir: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    cfg.validate()?;
    if m_list.is_empty() {
        return Err(CliError::Validation("sweep-m requires a non-empty --m-list".into()));
    }
    if m_list.iter().any(|&m| m == 0) {
        return Err(CliError::Validation("--m-list entries must be at least 1".into()));
    }
    let seeds = resolve_seeds(cfg, seeds);
    let max_m = *m_list.iter().max().expect("non-empty");
    let warmup = cfg.run.warmup.unwrap_or((max_m as u64).max(100));

    let mut csv = String::from("m,seed,rmse_ms,violation_prob,avg_aoi_ms\n");
    let mut summary = String::from(
        "m,mean_rmse_ms,se_rmse_ms,mean_violation_prob,se_violation_prob,mean_avg_aoi_ms,se_avg_aoi_ms\n",
    );
    for &m in m_list {
        let mut cell = cfg.clone();
        cell.learning.window = m;
        cell.run.warmup = Some(warmup);
        let outputs = run_seeds(&cell, Policy::Baseline2, &seeds, RunOptions::default())?;
        let rmses: Vec<f64> = outputs.iter().map(|o| mean_rmse(&o.report)).collect();
        let violations: Vec<f64> = outputs.iter().map(|o| o.report.violation_prob).collect();
        let avgs: Vec<f64> = outputs.iter().map(|o| o.report.avg_aoi_ms).collect();
        for ((seed, r), (v, a)) in
            seeds.iter().zip(&rmses).zip(violations.iter().zip(&avgs))
        {
            writeln!(csv, "{m},{seed},{r},{v},{a}").expect("string write");
        }
        let (mr, ser) = mean_and_se(&rmses);
        let (mv, sev) = mean_and_se(&violations);
        let (ma, sea) = mean_and_se(&avgs);
        writeln!(summary, "{m},{mr},{ser},{mv},{sev},{ma},{sea}").expect("string write");
        println!("sweep-m m={m} mean_rmse_ms={mr:.4} mean_violation={mv:.6}");
    }

    let mut set = OutputSet::new();
    set.add("sweep_m.csv", csv);
    set.add("sweep_m_summary.csv", summary);
    set.write(out_dir, "sweep-m", cfg, &seeds, &[Policy::Baseline2], started)
}

/// Exploration-weight sweep with the configured alpha_c.
pub fn cmd_sweep_alpha(
    cfg: &ScenarioConfig,
    alpha_list: &[f64],
    seeds: &[u64],
    out_dir: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    cfg.validate()?;
    if alpha_list.is_empty() {
        return Err(CliError::Validation("sweep-alpha requires a non-empty --alpha-i-list".into()));
    }
    if alpha_list.iter().any(|a| *a < 0.0 || !a.is_finite()) {
        return Err(CliError::Validation("--alpha-i-list entries must be nonnegative".into()));
    }
    let seeds = resolve_seeds(cfg, seeds);

    let mut csv = String::from("alpha_i,seed,violation_prob,avg_aoi_ms,rmse_ms\n");
    let mut summary = String::from(
        "alpha_i,mean_violation_prob,se_violation_prob,mean_avg_aoi_ms,se_avg_aoi_ms\n",
    );
    for &alpha in alpha_list {
        let mut cell = cfg.clone();
        cell.learning.alpha_i = alpha;
        let outputs = run_seeds(&cell, Policy::Proposed, &seeds, RunOptions::default())?;
        let violations: Vec<f64> = outputs.iter().map(|o| o.report.violation_prob).collect();
        let avgs: Vec<f64> = outputs.iter().map(|o| o.report.avg_aoi_ms).collect();
        for (seed, output) in seeds.iter().zip(&outputs) {
            writeln!(
                csv,
                "{alpha},{seed},{},{},{}",
                output.report.violation_prob,
                output.report.avg_aoi_ms,
                mean_rmse(&output.report)
            )
            .expect("string write");
        }
        let (mv, sev) = mean_and_se(&violations);
        let (ma, sea) = mean_and_se(&avgs);
        writeln!(summary, "{alpha},{mv},{sev},{ma},{sea}").expect("string write");
        println!("sweep-alpha alpha_i={alpha} mean_violation={mv:.6} mean_avg_aoi_ms={ma:.3}");
    }

    let mut set = OutputSet::new();
    set.add("sweep_alpha.csv", csv);
    set.add("sweep_alpha_summary.csv", summary);
    set.write(out_dir, "sweep-alpha", cfg, &seeds, &[Policy::Proposed], started)
}

/// Load the config file (or defaults) and apply shared CLI overrides.
pub fn load_config(
    path: Option<&PathBuf>,
    warmup: Option<u64>,
    candidates: Option<&str>,
) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match path {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(w) = warmup {
        cfg.run.warmup = Some(w);
    }
    if let Some(c) = candidates {
        apply_candidate_override(&mut cfg, c)?;
    }
    Ok(cfg)
}
