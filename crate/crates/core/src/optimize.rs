//! Minimization over density matrices by matrix mirror descent.
//!
//! Iterates `σ ← exp(log σ − η G) / tr(·)` where `G` is the gradient of the
//! objective along traceless Hermitian directions, with backtracking on `η`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::haar::ginibre;
use crate::hermitian::{herm_eig, spectral_map, HermitianOperator};
use crate::matrix::{ComplexMatrix, C64};
use crate::rng::SeededRng;
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptimizerConfig {
    pub max_iters: usize,
    /// First trial step; later iterations start from twice the last accepted step.
    pub initial_step: f64,
    /// Factor applied to the step after a rejected trial.
    pub backtrack: f64,
    /// Stop when the Frobenius norm of the traceless gradient falls below this.
    pub gradient_tolerance: f64,
    /// Stop when the objective improved by less than `stall_tolerance` over this many iterations.
    pub stall_window: usize,
    pub stall_tolerance: f64,
    /// Number of starting points; deterministic starts come first, the rest are random.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SimplexOptimizerConfig {
    fn default() -> Self {
        SimplexOptimizerConfig {
            max_iters: 5000,
            initial_step: 1.0,
            backtrack: 0.5,
            gradient_tolerance: 1e-9,
            stall_window: 50,
            stall_tolerance: 1e-12,
            restarts: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerOutcome {
    pub value: f64,
    pub argmin: HermitianOperator,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Orthonormal basis (Frobenius) of traceless Hermitian `d × d` matrices.
pub fn traceless_hermitian_basis(d: usize) -> Vec<HermitianOperator> {
    let mut out = Vec::with_capacity(d * d - 1);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut re = ComplexMatrix::zeros(d, d);
            re[(j, k)] = C64::new(s, 0.0);
            re[(k, j)] = C64::new(s, 0.0);
            out.push(HermitianOperator::from_hermitian(re));
            let mut im = ComplexMatrix::zeros(d, d);
            im[(j, k)] = C64::new(0.0, -s);
            im[(k, j)] = C64::new(0.0, s);
            out.push(HermitianOperator::from_hermitian(im));
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = alloc::vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = norm;
        }
        diag[l] = -(l as f64) * norm;
        out.push(HermitianOperator::from_diagonal(&diag));
    }
    out
}

/// A random full-rank density matrix for restarts.
pub(crate) fn random_full_rank(d: usize, rng: &mut SeededRng) -> HermitianOperator {
    let g = ginibre(d, d, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    HermitianOperator::from_hermitian(w.scale(1.0 / tr))
}

fn central_gradient(
    f: &dyn Fn(&HermitianOperator) -> Result<f64>,
    sigma: &HermitianOperator,
    lambda_min: f64,
    basis: &[HermitianOperator],
) -> Result<HermitianOperator> {
    let h = (0.1 * lambda_min).clamp(1e-12, 1e-5);
    let d = sigma.dim();
    let mut grad = HermitianOperator::zeros(d);
    for b in basis {
        let plus = f(&sigma.add(&b.scale(h)))?;
        let minus = f(&sigma.add(&b.scale(-h)))?;
        let g = (plus - minus) / (2.0 * h);
        if !g.is_finite() {
            return Err(Error::NonFiniteObjective { at: h });
        }
        grad = grad.add(&b.scale(g));
    }
    Ok(grad)
}

/// Smallest relative eigenvalue kept by iterates; below this the reconstruction roundoff can flip signs.
const SPECTRUM_FLOOR: f64 = 1e-13;

fn normalize_exp(log_sigma: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = herm_eig(log_sigma)?;
    let top = eig.max_eigenvalue();
    let vals: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .map(|&x| (x - top).exp().max(SPECTRUM_FLOOR))
        .collect();
    let total: f64 = vals.iter().sum();
    let vals: Vec<f64> = vals.iter().map(|v| v / total).collect();
    Ok(eig.reconstruct(&vals))
}

/// Logarithm of a full-rank density matrix, returned with its smallest eigenvalue.
fn log_and_min(sigma: &HermitianOperator) -> Result<(HermitianOperator, f64)> {
    let eig = herm_eig(sigma)?;
    let min = eig.min_eigenvalue();
    let tol = Tolerances {
        support_scale: 0.0,
        ..Tolerances::default()
    };
    Ok((spectral_map(&eig, f64::ln, 0.0, &tol)?, min))
}

/// Pulls a start point into the interior of the state space.
fn interior(sigma: &HermitianOperator) -> HermitianOperator {
    let d = sigma.dim();
    let floor = 1e-8;
    let tr = sigma.trace();
    sigma
        .scale((1.0 - floor) / tr)
        .add(&HermitianOperator::identity(d).scale(floor / d as f64))
}

/// Gradient of an objective over density matrices; only its traceless part is used.
pub type GradientFn<'a> = dyn Fn(&HermitianOperator) -> Result<HermitianOperator> + 'a;

fn traceless(g: HermitianOperator) -> HermitianOperator {
    let d = g.dim();
    let shift = g.trace() / d as f64;
    g.sub(&HermitianOperator::identity(d).scale(shift))
}

fn descend(
    f: &dyn Fn(&HermitianOperator) -> Result<f64>,
    gradient: Option<&GradientFn<'_>>,
    start: &HermitianOperator,
    basis: &[HermitianOperator],
    config: &SimplexOptimizerConfig,
) -> Result<OptimizerOutcome> {
    let mut sigma = interior(start);
    let mut value = f(&sigma)?;
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective { at: 0.0 });
    }
    let mut history: Vec<f64> = alloc::vec![value];
    let mut step = config.initial_step;
    let mut grad_norm = f64::INFINITY;
    let mut previous: Option<(HermitianOperator, f64)> = None;
    for iter in 0..config.max_iters {
        let (log_sigma, lambda_min) = log_and_min(&sigma)?;
        let grad = match gradient {
            Some(g) => {
                let g = traceless(g(&sigma)?);
                if !g.matrix().is_finite() {
                    return Err(Error::NonFiniteObjective { at: 0.0 });
                }
                g
            }
            None => central_gradient(f, &sigma, lambda_min, basis)?,
        };
        grad_norm = grad.matrix().frobenius_norm();
        if grad_norm <= config.gradient_tolerance {
            return Ok(OptimizerOutcome {
                value,
                argmin: sigma,
                iterations: iter,
                gradient_norm: grad_norm,
                converged: true,
            });
        }
        let mut trial_step = step;
        // Barzilai-Borwein step from the last accepted move `-t g_old`.
        if let Some((g_old, t_old)) = &previous {
            let y = grad.sub(g_old);
            let sy = -t_old * g_old.inner(&y);
            let ss = t_old * t_old * g_old.inner(g_old);
            if sy > 0.0 && (ss / sy).is_finite() {
                trial_step = (ss / sy).clamp(1e-10, 1e6);
            }
        }
        let mut accepted = false;
        for _ in 0..60 {
            let shifted = log_sigma.sub(&grad.scale(trial_step));
            if !shifted.matrix().is_finite() {
                trial_step *= config.backtrack;
                continue;
            }
            let candidate = normalize_exp(&shifted)?;
            let v = f(&candidate)?;
            if v.is_finite() && v < value {
                sigma = candidate;
                value = v;
                accepted = true;
                break;
            }
            trial_step *= config.backtrack;
        }
        if !accepted {
            // No descent direction resolvable at machine precision.
            return Ok(OptimizerOutcome {
                value,
                argmin: sigma,
                iterations: iter,
                gradient_norm: grad_norm,
                converged: true,
            });
        }
        step = (trial_step * 2.0).min(1e6);
        previous = Some((grad, trial_step));
        history.push(value);
        let w = config.stall_window;
        if history.len() > w && history[history.len() - 1 - w] - value < config.stall_tolerance {
            return Ok(OptimizerOutcome {
                value,
                argmin: sigma,
                iterations: iter + 1,
                gradient_norm: grad_norm,
                converged: true,
            });
        }
    }
    Ok(OptimizerOutcome {
        value,
        argmin: sigma,
        iterations: config.max_iters,
        gradient_norm: grad_norm,
        converged: false,
    })
}

/// Minimizes `f` over `d × d` density matrices from each start (plus random ones up to `config.restarts`).
///
/// Returns the best run; fails if that run hit the iteration limit.
pub fn minimize_density(
    d: usize,
    f: &dyn Fn(&HermitianOperator) -> Result<f64>,
    starts: &[HermitianOperator],
    config: &SimplexOptimizerConfig,
) -> Result<OptimizerOutcome> {
    minimize_density_with_gradient(d, f, None, starts, config)
}

/// [`minimize_density`] with an analytic gradient in place of central differences.
pub fn minimize_density_with_gradient(
    d: usize,
    f: &dyn Fn(&HermitianOperator) -> Result<f64>,
    gradient: Option<&GradientFn<'_>>,
    starts: &[HermitianOperator],
    config: &SimplexOptimizerConfig,
) -> Result<OptimizerOutcome> {
    let mut all: Vec<HermitianOperator> = starts.to_vec();
    let mut k = 0u64;
    while all.len() < config.restarts.max(1) {
        let mut rng = SeededRng::new(config.seed, k);
        all.push(random_full_rank(d, &mut rng));
        k += 1;
    }
    if d == 1 {
        let one = HermitianOperator::identity(1);
        let value = f(&one)?;
        return Ok(OptimizerOutcome {
            value,
            argmin: one,
            iterations: 0,
            gradient_norm: 0.0,
            converged: true,
        });
    }
    let basis = traceless_hermitian_basis(d);
    let mut best: Option<OptimizerOutcome> = None;
    let mut failure = None;
    for s in &all {
        let run = match descend(f, gradient, s, &basis, config) {
            Ok(run) => run,
            // A start outside the objective's domain is skipped.
            Err(e @ Error::NonFiniteObjective { .. }) => {
                failure = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        if best.as_ref().map_or(true, |b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = match (best, failure) {
        (Some(b), _) => b,
        (None, Some(e)) => return Err(e),
        (None, None) => return Err(Error::NonFiniteObjective { at: 0.0 }),
    };
    if !best.converged {
        return Err(Error::OptimizerNoConvergence {
            iterations: best.iterations,
            gradient_norm: best.gradient_norm,
            objective: best.value,
        });
    }
    Ok(best)
}
