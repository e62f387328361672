//! Marginal-likelihood hyperparameter tuning.
//!
//! Derivative-free simplex search over (log h, log lambda, log sigma_j)
//! inside a box; smoothness stays fixed. Dimensions whose bounds collapse
//! to a point are frozen, so a fully degenerate box returns the initial
//! hyperparameters unchanged.

use rand::RngExt;
use rand_chacha::ChaCha12Rng;

use super::dataset::SlidingDataset;
use super::kernel::KernelHyperparams;
use super::model::{GprModel, GprOptions};

/// Box bounds on (output_scale, length_scale, noise_std).
#[derive(Debug, Clone, Copy)]
pub struct FitBounds {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
}

impl FitBounds {
    /// Bounds spanning `ratio` both ways around the given hyperparameters.
    pub fn around(theta: &KernelHyperparams, ratio: f64) -> Self {
        let c = [theta.output_scale, theta.length_scale, theta.noise_std];
        Self {
            lower: [c[0] / ratio, c[1] / ratio, c[2] / ratio],
            upper: [c[0] * ratio, c[1] * ratio, c[2] * ratio],
        }
    }

    /// Degenerate box pinning every parameter at its current value.
    pub fn fixed(theta: &KernelHyperparams) -> Self {
        Self::around(theta, 1.0)
    }
}

/// Search configuration; defaults follow the refit policy used by agents.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub restarts: usize,
    pub max_evals_per_restart: usize,
    pub initial_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { restarts: 3, max_evals_per_restart: 200, initial_step: 0.7 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub theta: KernelHyperparams,
    pub log_marginal_likelihood: f64,
    /// True when not a single candidate factorized; the initial
    /// hyperparameters are returned unchanged in that case.
    pub all_singular: bool,
    pub evaluations: usize,
}

struct Objective<'a> {
    dataset: &'a SlidingDataset,
    template: KernelHyperparams,
    options: GprOptions,
    evaluations: usize,
    successes: usize,
}

impl Objective<'_> {
    /// Negative log marginal likelihood; +inf on singular kernels.
    fn eval(&mut self, theta: &KernelHyperparams) -> f64 {
        self.evaluations += 1;
        let jitter_var = theta.noise_std * theta.noise_std;
        match GprModel::factorize_exact(self.dataset, theta, self.options, jitter_var) {
            Ok(model) => {
                self.successes += 1;
                -model.log_marginal_likelihood()
            }
            Err(_) => f64::INFINITY,
        }
    }

    fn theta_at(&self, z: &[f64; 3]) -> KernelHyperparams {
        KernelHyperparams {
            output_scale: z[0].exp(),
            length_scale: z[1].exp(),
            smoothness: self.template.smoothness,
            noise_std: z[2].exp(),
        }
    }
}

fn clamp_point(z: &mut [f64; 3], lo: &[f64; 3], hi: &[f64; 3]) {
    for i in 0..3 {
        z[i] = z[i].clamp(lo[i], hi[i]);
    }
}

/// Maximize the marginal likelihood inside `bounds`, warm-starting from
/// `theta_init`. The result never has a lower marginal likelihood than the
/// initial point (when that point factorizes at all).
pub fn fit_hyperparams(
    dataset: &SlidingDataset,
    theta_init: &KernelHyperparams,
    bounds: &FitBounds,
    gpr_options: GprOptions,
    fit_options: &FitOptions,
    rng: &mut ChaCha12Rng,
) -> FitReport {
    let log_or_floor = |v: f64| if v > 0.0 { v.ln() } else { -745.0 };
    let lo = [
        log_or_floor(bounds.lower[0]),
        log_or_floor(bounds.lower[1]),
        log_or_floor(bounds.lower[2]),
    ];
    let hi = [
        log_or_floor(bounds.upper[0]),
        log_or_floor(bounds.upper[1]),
        log_or_floor(bounds.upper[2]),
    ];
    let active: Vec<usize> = (0..3).filter(|&i| hi[i] - lo[i] > 1e-12).collect();

    let mut obj = Objective {
        dataset,
        template: *theta_init,
        options: gpr_options,
        evaluations: 0,
        successes: 0,
    };

    let mut z_init = [
        log_or_floor(theta_init.output_scale),
        log_or_floor(theta_init.length_scale),
        log_or_floor(theta_init.noise_std),
    ];
    clamp_point(&mut z_init, &lo, &hi);

    let mut best_z = z_init;
    let mut best_f = obj.eval(&obj.theta_at(&z_init));

    if !active.is_empty() {
        for restart in 0..fit_options.restarts {
            let start = if restart == 0 {
                z_init
            } else {
                let mut z = z_init;
                for &i in &active {
                    z[i] = rng.random_range(lo[i]..=hi[i]);
                }
                z
            };
            let (z, f) =
                nelder_mead(&mut obj, start, &active, &lo, &hi, fit_options);
            if f < best_f {
                best_f = f;
                best_z = z;
            }
        }
    }

    let all_singular = obj.successes == 0;
    let theta = if all_singular || best_z == z_init { *theta_init } else { obj.theta_at(&best_z) };
    FitReport {
        theta,
        log_marginal_likelihood: -best_f,
        all_singular,
        evaluations: obj.evaluations,
    }
}

/// Standard Nelder-Mead over the active coordinates, clamped to the box.
fn nelder_mead(
    obj: &mut Objective<'_>,
    start: [f64; 3],
    active: &[usize],
    lo: &[f64; 3],
    hi: &[f64; 3],
    options: &FitOptions,
) -> ([f64; 3], f64) {
    let dim = active.len();
    let mut evals = 0usize;
    let eval_point = |obj: &mut Objective<'_>, z: &[f64; 3], evals: &mut usize| -> f64 {
        *evals += 1;
        obj.eval(&obj.theta_at(z))
    };

    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(dim + 1);
    let f0 = eval_point(obj, &start, &mut evals);
    simplex.push((start, f0));
    for &i in active {
        let mut z = start;
        let step =
            if z[i] + options.initial_step <= hi[i] { options.initial_step } else { -options.initial_step };
        z[i] = (z[i] + step).clamp(lo[i], hi[i]);
        let f = eval_point(obj, &z, &mut evals);
        simplex.push((z, f));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    while evals < options.max_evals_per_restart {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0];
        let worst = simplex[dim];
        let second_worst = simplex[dim - 1];

        // Centroid of all but the worst vertex, over active dims.
        let mut centroid = best.0;
        for &i in active {
            centroid[i] = simplex[..dim].iter().map(|(z, _)| z[i]).sum::<f64>() / dim as f64;
        }

        let mut reflected = centroid;
        for &i in active {
            reflected[i] = centroid[i] + alpha * (centroid[i] - worst.0[i]);
        }
        clamp_point(&mut reflected, lo, hi);
        let f_r = eval_point(obj, &reflected, &mut evals);

        if f_r < best.1 {
            let mut expanded = centroid;
            for &i in active {
                expanded[i] = centroid[i] + gamma * (reflected[i] - centroid[i]);
            }
            clamp_point(&mut expanded, lo, hi);
            let f_e = eval_point(obj, &expanded, &mut evals);
            simplex[dim] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
        } else if f_r < second_worst.1 {
            simplex[dim] = (reflected, f_r);
        } else {
            let mut contracted = centroid;
            for &i in active {
                contracted[i] = centroid[i] + rho * (worst.0[i] - centroid[i]);
            }
            clamp_point(&mut contracted, lo, hi);
            let f_c = eval_point(obj, &contracted, &mut evals);
            if f_c < worst.1 {
                simplex[dim] = (contracted, f_c);
            } else {
                // Shrink toward the best vertex.
                for v in simplex.iter_mut().skip(1) {
                    for &i in active {
                        v.0[i] = best.0[i] + sigma * (v.0[i] - best.0[i]);
                    }
                    v.1 = eval_point(obj, &v.0, &mut evals);
                    if evals >= options.max_evals_per_restart {
                        break;
                    }
                }
            }
        }

        let spread = simplex.iter().map(|(_, f)| *f).fold(f64::INFINITY, f64::min);
        let worst_f = simplex.iter().map(|(_, f)| *f).fold(f64::NEG_INFINITY, f64::max);
        if worst_f.is_finite() && (worst_f - spread).abs() < 1e-10 {
            break;
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}
