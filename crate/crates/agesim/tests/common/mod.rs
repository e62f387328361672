//! Shared test oracles: dense multivariate-Gaussian conditioning and
//! log-density via explicit Gauss-Jordan inversion.
//!
//! Deliberately naive and independent of the Cholesky-based production
//! path; only the kernel function itself is shared (it is pinned
//! separately by closed-form tests).

#![allow(dead_code)]

use rand::RngExt;
use rand_chacha::ChaCha12Rng;

use agesim::gpr::{matern, KernelHyperparams, MaternScaling};

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .expect("non-empty");
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-300, "singular matrix in oracle");
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let factor = aug[row][col];
                if factor != 0.0 {
                    for k in 0..2 * n {
                        aug[row][k] -= factor * aug[col][k];
                    }
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// log det of a positive-definite matrix by plain LU elimination.
pub fn log_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut acc = 0.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty");
        if pivot != col {
            m.swap(col, pivot);
            // Row swaps flip the determinant sign; SPD inputs keep |det|.
        }
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "singular matrix in oracle");
        acc += p.abs().ln();
        for row in col + 1..n {
            let factor = m[row][col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row][k] -= factor * m[col][k];
                }
            }
        }
    }
    acc
}

fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Condition the zero-mean Gaussian `[f_*, y]` on `y`: the covariance has
/// the query first, training block after (training block already jittered).
/// Returns the conditional mean and variance of the query coordinate.
pub fn dense_conditional(cov: &[Vec<f64>], y: &[f64]) -> (f64, f64) {
    let n = y.len();
    assert_eq!(cov.len(), n + 1);
    let train: Vec<Vec<f64>> = (1..=n).map(|i| cov[i][1..=n].to_vec()).collect();
    let cross: Vec<f64> = (1..=n).map(|i| cov[0][i]).collect();
    let inv = invert(&train);
    let w = mat_vec(&inv, &cross);
    let mean = w.iter().zip(y).map(|(a, b)| a * b).sum();
    let variance = cov[0][0] - w.iter().zip(&cross).map(|(a, b)| a * b).sum::<f64>();
    (mean, variance)
}

/// Zero-mean multivariate normal log-density of `y` under `cov`.
pub fn dense_log_density(cov: &[Vec<f64>], y: &[f64]) -> f64 {
    let n = y.len();
    let inv = invert(cov);
    let quad: f64 = mat_vec(&inv, y).iter().zip(y).map(|(a, b)| a * b).sum();
    -0.5 * quad - 0.5 * log_det(cov) - 0.5 * n as f64 * (std::f64::consts::TAU).ln()
}

/// Random kernel hyperparameters with moderate scales.
pub fn random_theta(rng: &mut ChaCha12Rng) -> KernelHyperparams {
    KernelHyperparams::new(
        rng.random_range(0.5..5.0),
        rng.random_range(0.3..3.0),
        0.5,
        rng.random_range(0.01..0.5),
    )
}

/// Kernel matrix over inputs, optionally with jitter on the diagonal.
pub fn kernel_matrix(
    inputs: &[Vec<f64>],
    theta: &KernelHyperparams,
    scaling: MaternScaling,
    jitter_var: f64,
) -> Vec<Vec<f64>> {
    let n = inputs.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = matern(&inputs[i], &inputs[j], theta, scaling).unwrap();
                    if i == j {
                        v + jitter_var
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_inputs(rng: &mut ChaCha12Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect()).collect()
}
