//! Gaussian-process regression over a sliding window of state-action
//! transitions: Matérn covariance, posterior prediction, marginal
//! likelihood, and hyperparameter tuning.

mod bessel;
mod dataset;
mod fit;
mod kernel;
mod model;

pub use bessel::bessel_k;
pub use dataset::{Sample, SlidingDataset};
pub use fit::{fit_hyperparams, FitBounds, FitOptions, FitReport};
pub use kernel::{matern, KernelHyperparams, MaternScaling};
pub use model::{
    log_marginal_likelihood, predict, prior_posterior, GprModel, GprOptions, Posterior,
};

#[derive(Debug, thiserror::Error)]
pub enum GprError {
    #[error("invalid kernel hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("input dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("covariance evaluation left the numerical domain: {0}")]
    NumericalDomain(String),
    #[error("kernel matrix is singular (jitter variance {jitter_var})")]
    SingularKernel { jitter_var: f64 },
    #[error("operation requires a non-empty dataset")]
    EmptyDataset,
}
