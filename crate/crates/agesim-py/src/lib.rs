//! Python bindings: scenario configuration, simulation runs, and direct
//! access to the Gaussian-process learner and the allocation math.
//!
//! Build with `cargo build --release -p agesim-py` and load the produced
//! `libagesim_py.so` as the module `agesim_py` (see python/smoke_test.py),
//! or build a wheel with maturin.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use agesim::alloc::{self, ActionSpace};
use agesim::config::ScenarioConfig;
use agesim::engine::{run_simulation, Policy, SimOutput};
use agesim::gpr::{
    fit_hyperparams, matern, FitBounds, FitOptions, GprModel, GprOptions, KernelHyperparams,
    MaternScaling, Sample, SlidingDataset,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Scenario configuration; construct from TOML text or defaults.
#[pyclass(name = "Config")]
#[derive(Clone)]
struct PyConfig {
    inner: ScenarioConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (toml_text = None))]
    fn new(toml_text: Option<&str>) -> PyResult<Self> {
        let inner = match toml_text {
            Some(text) => ScenarioConfig::from_toml_str(text).map_err(value_err)?,
            None => ScenarioConfig::default(),
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(Self { inner: ScenarioConfig::load(path).map_err(value_err)? })
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml_string()
    }

    #[getter]
    fn pairs(&self) -> usize {
        self.inner.radio.pairs
    }

    #[setter]
    fn set_pairs(&mut self, v: usize) {
        self.inner.radio.pairs = v;
    }

    #[getter]
    fn rbs(&self) -> usize {
        self.inner.radio.rbs
    }

    #[setter]
    fn set_rbs(&mut self, v: usize) {
        self.inner.radio.rbs = v;
    }

    #[getter]
    fn horizon(&self) -> u64 {
        self.inner.run.horizon
    }

    #[setter]
    fn set_horizon(&mut self, v: u64) {
        self.inner.run.horizon = v;
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.run.seed
    }

    #[setter]
    fn set_seed(&mut self, v: u64) {
        self.inner.run.seed = v;
    }

    #[getter]
    fn window(&self) -> usize {
        self.inner.learning.window
    }

    #[setter]
    fn set_window(&mut self, v: usize) {
        self.inner.learning.window = v;
    }

    #[getter]
    fn alpha_c(&self) -> f64 {
        self.inner.learning.alpha_c
    }

    #[setter]
    fn set_alpha_c(&mut self, v: f64) {
        self.inner.learning.alpha_c = v;
    }

    #[getter]
    fn alpha_i(&self) -> f64 {
        self.inner.learning.alpha_i
    }

    #[setter]
    fn set_alpha_i(&mut self, v: f64) {
        self.inner.learning.alpha_i = v;
    }

    #[getter]
    fn arrival_rate_bps(&self) -> f64 {
        self.inner.traffic.arrival_rate_bps
    }

    #[setter]
    fn set_arrival_rate_bps(&mut self, v: f64) {
        self.inner.traffic.arrival_rate_bps = v;
    }

    /// Packets per slot derived from the arrival rate, slot and packet size.
    fn arrival_packets_per_slot(&self) -> f64 {
        self.inner.arrival_packets_per_slot()
    }

    /// Simulate one policy ("proposed", "baseline2" or "baseline1").
    fn run(&self, policy: &str) -> PyResult<PyRunResult> {
        let policy: Policy = policy.parse().map_err(value_err)?;
        let output = run_simulation(&self.inner, policy)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(PyRunResult { output })
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(value_err)
    }
}

/// Metrics and trace of one finished simulation.
#[pyclass(name = "RunResult")]
struct PyRunResult {
    output: SimOutput,
}

#[pymethods]
impl PyRunResult {
    #[getter]
    fn violation_prob(&self) -> f64 {
        self.output.report.violation_prob
    }

    #[getter]
    fn avg_aoi_ms(&self) -> f64 {
        self.output.report.avg_aoi_ms
    }

    #[getter]
    fn per_pair_rmse_ms(&self) -> Option<Vec<f64>> {
        self.output.report.per_pair_rmse_ms.clone()
    }

    #[getter]
    fn fallback_slots(&self) -> u64 {
        self.output.report.fallback_slots
    }

    /// CCDF as a list of (threshold_ms, probability) points.
    fn ccdf(&self) -> Vec<(f64, f64)> {
        self.output.report.ccdf.clone()
    }

    /// Per-slot rows: (slot, pair, delta_ms, mu_ms, sigma2_ms2, rate_pkts,
    /// total_power_w, delivered).
    fn trace(&self) -> Vec<(u64, usize, f64, Option<f64>, Option<f64>, f64, f64, bool)> {
        self.output
            .trace
            .iter()
            .map(|r| {
                (r.slot, r.pair, r.delta_ms, r.mu_ms, r.sigma2_ms2, r.rate_pkts, r.total_power_w, r.delivered)
            })
            .collect()
    }
}

/// Sliding-window Gaussian-process learner over raw inputs.
#[pyclass(name = "Gpr")]
struct PyGpr {
    dataset: SlidingDataset,
    theta: KernelHyperparams,
    options: GprOptions,
}

#[pymethods]
impl PyGpr {
    #[new]
    #[pyo3(signature = (window, output_scale, length_scale, smoothness = 0.5, noise_std = 0.0, standard_scaling = false))]
    fn new(
        window: usize,
        output_scale: f64,
        length_scale: f64,
        smoothness: f64,
        noise_std: f64,
        standard_scaling: bool,
    ) -> PyResult<Self> {
        if window == 0 {
            return Err(PyValueError::new_err("window must be at least 1"));
        }
        let theta = KernelHyperparams::new(output_scale, length_scale, smoothness, noise_std);
        theta.validate().map_err(value_err)?;
        let scaling = if standard_scaling {
            MaternScaling::StandardSqrtTwoNu
        } else {
            MaternScaling::PaperTwoSqrtNu
        };
        Ok(Self {
            dataset: SlidingDataset::new(window),
            theta,
            options: GprOptions { scaling, mean_center: false },
        })
    }

    fn push(&mut self, x: Vec<f64>, y: f64) {
        self.dataset.push(Sample { x, y });
    }

    fn __len__(&self) -> usize {
        self.dataset.len()
    }

    /// Posterior (mean, variance) at the query input.
    fn predict(&self, x: Vec<f64>) -> PyResult<(f64, f64)> {
        let p = agesim::gpr::predict(&self.dataset, &self.theta, self.options, &x)
            .map_err(value_err)?;
        Ok((p.mean, p.variance))
    }

    fn log_marginal_likelihood(&self) -> PyResult<f64> {
        GprModel::factorize(&self.dataset, &self.theta, self.options)
            .map(|m| m.log_marginal_likelihood())
            .map_err(value_err)
    }

    /// Refit (output_scale, length_scale, noise_std) by marginal likelihood
    /// and return them.
    #[pyo3(signature = (bound_ratio = 1e3, seed = 0))]
    fn fit(&mut self, bound_ratio: f64, seed: u64) -> PyResult<(f64, f64, f64)> {
        let mut rng = agesim::rng::substream(seed, "python-fit", 0);
        let report = fit_hyperparams(
            &self.dataset,
            &self.theta,
            &FitBounds::around(&self.theta, bound_ratio),
            self.options,
            &FitOptions::default(),
            &mut rng,
        );
        self.theta = report.theta;
        Ok((self.theta.output_scale, self.theta.length_scale, self.theta.noise_std))
    }
}

/// Matérn covariance of two inputs.
#[pyfunction]
#[pyo3(signature = (x_i, x_j, output_scale, length_scale, smoothness = 0.5, standard_scaling = false))]
fn matern_cov(
    x_i: Vec<f64>,
    x_j: Vec<f64>,
    output_scale: f64,
    length_scale: f64,
    smoothness: f64,
    standard_scaling: bool,
) -> PyResult<f64> {
    let theta = KernelHyperparams::new(output_scale, length_scale, smoothness, 0.0);
    let scaling = if standard_scaling {
        MaternScaling::StandardSqrtTwoNu
    } else {
        MaternScaling::PaperTwoSqrtNu
    };
    matern(&x_i, &x_j, &theta, scaling).map_err(value_err)
}

/// Probability that a Gaussian (mu, sigma2) exceeds the threshold.
#[pyfunction]
fn violation_probability(mu: f64, sigma2: f64, threshold: f64) -> f64 {
    alloc::violation_probability(mu, sigma2, threshold)
}

/// The exploitation-exploration objective value (to minimize).
#[pyfunction]
fn acquisition(mu: f64, sigma2: f64, alpha_c: f64, alpha_i: f64, threshold: f64) -> f64 {
    alloc::acquisition(mu, sigma2, alpha_c, alpha_i, threshold)
}

/// Number of feasible power allocations for (rbs, levels, p_dbm, p_max_dbm).
#[pyfunction]
fn action_space_size(rbs: usize, levels: u16, rb_power_dbm: f64, total_power_dbm: f64) -> PyResult<u128> {
    let p = agesim::config::dbm_to_w(rb_power_dbm);
    let pmax = agesim::config::dbm_to_w(total_power_dbm);
    let space = ActionSpace::build(rbs, levels, p, pmax, 2, false).map_err(value_err)?;
    Ok(space.feasible_count())
}

/// Packet arrival rate per slot from (bit/s, slot seconds, packet bits).
#[pyfunction]
fn derive_arrival(arrival_rate_bps: f64, tau_s: f64, packet_bits: f64) -> f64 {
    agesim::config::derive_arrival(arrival_rate_bps, tau_s, packet_bits)
}

#[pymodule]
fn agesim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PyRunResult>()?;
    m.add_class::<PyGpr>()?;
    m.add_function(wrap_pyfunction!(matern_cov, m)?)?;
    m.add_function(wrap_pyfunction!(violation_probability, m)?)?;
    m.add_function(wrap_pyfunction!(acquisition, m)?)?;
    m.add_function(wrap_pyfunction!(action_space_size, m)?)?;
    m.add_function(wrap_pyfunction!(derive_arrival, m)?)?;
    Ok(())
}
