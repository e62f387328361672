//! Posterior prediction and marginal likelihood over the sliding window.
//!
//! The Gram matrix is factorized once per window update (Cholesky) and the
//! factorization is reused by every candidate-action prediction in the slot,
//! so a decision over S candidates costs O(M^2) per candidate instead of
//! O(M^3).

use nalgebra::{DMatrix, DVector};

use super::dataset::SlidingDataset;
use super::kernel::{matern_r, euclidean, KernelHyperparams, MaternScaling};
use super::GprError;

/// Gaussian predictive distribution for one query input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    /// Predictive mean (ms).
    pub mean: f64,
    /// Predictive variance (ms^2), clamped at zero.
    pub variance: f64,
}

/// Kernel evaluation options fixed per run.
#[derive(Debug, Clone, Copy)]
pub struct GprOptions {
    pub scaling: MaternScaling,
    /// Subtract the window mean from the targets before conditioning.
    /// Off by default: the prior mean is zero.
    pub mean_center: bool,
}

impl Default for GprOptions {
    fn default() -> Self {
        Self { scaling: MaternScaling::PaperTwoSqrtNu, mean_center: false }
    }
}

/// Factorized Gram matrix plus everything needed for O(M^2) predictions.
#[derive(Debug, Clone)]
pub struct GprModel {
    lower: DMatrix<f64>,
    alpha: DVector<f64>,
    centered_y: DVector<f64>,
    inputs: Vec<Vec<f64>>,
    theta: KernelHyperparams,
    options: GprOptions,
    mean_offset: f64,
    jitter_var: f64,
    log_det: f64,
}

/// Build the jittered Gram matrix C = K + jitter_var I.
fn gram_matrix(
    inputs: &[&[f64]],
    theta: &KernelHyperparams,
    scaling: MaternScaling,
    jitter_var: f64,
) -> DMatrix<f64> {
    let n = inputs.len();
    let mut c = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = matern_r(euclidean(inputs[i], inputs[j]), theta, scaling);
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
        c[(i, i)] += jitter_var;
    }
    c
}

impl GprModel {
    /// Factorize the window covariance with the configured jitter, escalating
    /// the jitter tenfold (up to 1e-2 h^2) while the factorization fails.
    /// A zero configured jitter is never escalated.
    pub fn factorize(
        dataset: &SlidingDataset,
        theta: &KernelHyperparams,
        options: GprOptions,
    ) -> Result<Self, GprError> {
        theta.validate()?;
        if dataset.is_empty() {
            return Err(GprError::EmptyDataset);
        }
        let h2 = theta.output_scale * theta.output_scale;
        let mut jitter_var = theta.noise_std * theta.noise_std;
        loop {
            match Self::factorize_exact(dataset, theta, options, jitter_var) {
                Ok(model) => return Ok(model),
                Err(GprError::SingularKernel { .. }) => {
                    if jitter_var == 0.0 || jitter_var >= 1e-2 * h2 {
                        return Err(GprError::SingularKernel { jitter_var });
                    }
                    jitter_var = (jitter_var.max(1e-6 * h2 / 10.0) * 10.0).min(1e-2 * h2);
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Factorize with exactly the given jitter variance; no escalation.
    pub fn factorize_exact(
        dataset: &SlidingDataset,
        theta: &KernelHyperparams,
        options: GprOptions,
        jitter_var: f64,
    ) -> Result<Self, GprError> {
        theta.validate()?;
        if dataset.is_empty() {
            return Err(GprError::EmptyDataset);
        }
        let inputs_ref = dataset.inputs();
        let c = gram_matrix(&inputs_ref, theta, options.scaling, jitter_var);
        let chol = nalgebra::Cholesky::new(c).ok_or(GprError::SingularKernel { jitter_var })?;
        let lower = chol.l();
        let log_det = 2.0 * lower.diagonal().iter().map(|d| d.ln()).sum::<f64>();

        let y_raw = DVector::from_vec(dataset.outputs());
        let mean_offset = if options.mean_center { y_raw.mean() } else { 0.0 };
        let centered_y = y_raw.map(|v| v - mean_offset);
        let alpha = chol.solve(&centered_y);

        Ok(Self {
            lower,
            alpha,
            centered_y,
            inputs: inputs_ref.iter().map(|x| x.to_vec()).collect(),
            theta: *theta,
            options,
            mean_offset,
            jitter_var,
            log_det,
        })
    }

    pub fn window_len(&self) -> usize {
        self.inputs.len()
    }

    pub fn theta(&self) -> &KernelHyperparams {
        &self.theta
    }

    /// Jitter variance actually used, after any escalation.
    pub fn jitter_var(&self) -> f64 {
        self.jitter_var
    }

    /// Predictive distribution at one query input.
    pub fn predict(&self, x_star: &[f64]) -> Posterior {
        self.predict_batch(std::slice::from_ref(&x_star))[0]
    }

    /// Predictive distributions for a batch of query inputs, sharing the
    /// cached factorization.
    pub fn predict_batch<X: AsRef<[f64]>>(&self, queries: &[X]) -> Vec<Posterior> {
        let n = self.inputs.len();
        let s = queries.len();
        let mut cross = DMatrix::zeros(n, s);
        for (j, q) in queries.iter().enumerate() {
            let q = q.as_ref();
            for i in 0..n {
                cross[(i, j)] =
                    matern_r(euclidean(&self.inputs[i], q), &self.theta, self.options.scaling);
            }
        }
        let means: Vec<f64> = (0..s)
            .map(|j| self.mean_offset + cross.column(j).dot(&self.alpha))
            .collect();
        // v = L^{-1} c_*; variance = k(x*,x*) - ||v||^2.
        let solved = self.lower.solve_lower_triangular_mut(&mut cross);
        debug_assert!(solved, "triangular solve on a factorized matrix cannot fail");
        let prior_var = self.theta.output_scale * self.theta.output_scale;
        means
            .into_iter()
            .enumerate()
            .map(|(j, mean)| {
                let variance = (prior_var - cross.column(j).norm_squared()).max(0.0);
                Posterior { mean, variance }
            })
            .collect()
    }

    /// Log marginal likelihood of the window under the current kernel.
    pub fn log_marginal_likelihood(&self) -> f64 {
        let n = self.window_len() as f64;
        -0.5 * self.centered_y.dot(&self.alpha)
            - 0.5 * self.log_det
            - 0.5 * n * (std::f64::consts::TAU).ln()
    }

    /// Reconstruction L L^T of the factorized Gram matrix (test support).
    pub fn reconstruct_gram(&self) -> DMatrix<f64> {
        &self.lower * self.lower.transpose()
    }
}

/// Posterior with no data: the prior (0, h^2) at any query.
pub fn prior_posterior(theta: &KernelHyperparams) -> Posterior {
    Posterior { mean: 0.0, variance: theta.output_scale * theta.output_scale }
}

/// Predictive distribution at `x_star`, factorizing on the fly. Falls back
/// to the prior on an empty window.
pub fn predict(
    dataset: &SlidingDataset,
    theta: &KernelHyperparams,
    options: GprOptions,
    x_star: &[f64],
) -> Result<Posterior, GprError> {
    if dataset.is_empty() {
        theta.validate()?;
        return Ok(prior_posterior(theta));
    }
    Ok(GprModel::factorize(dataset, theta, options)?.predict(x_star))
}

/// Log marginal likelihood, factorizing on the fly.
pub fn log_marginal_likelihood(
    dataset: &SlidingDataset,
    theta: &KernelHyperparams,
    options: GprOptions,
) -> Result<f64, GprError> {
    Ok(GprModel::factorize(dataset, theta, options)?.log_marginal_likelihood())
}
