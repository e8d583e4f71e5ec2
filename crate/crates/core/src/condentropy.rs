//! Conditional Rényi entropies `H_α(A|B)`, their optimized (`↑`) variants and
//! Rényi coherent informations.

use alloc::vec::Vec;

use rand::RngCore;

use crate::channel::QuantumChannel;
use crate::divergence::{divergence_from_spectra, identity_tensor_spectrum, DivergenceKind, ALPHA_ONE_GUARD};
use crate::error::{invalid, precondition, Error, Result};
use crate::hermitian::{herm_eig_with, psd_power, HermitianOperator};
use crate::matrix::{partial_trace, ComplexMatrix};
use crate::optimize::{
    minimize_density, minimize_density_with_gradient, GradientFn, OptimizerOutcome, SimplexOptimizerConfig,
};
use crate::state::{BipartiteState, MultipartiteState};
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// Largest joint dimension accepted by [`tensor_power_entropy`].
pub const TENSOR_POWER_DIM_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Petz,
    Sandwiched,
}

/// Family, order and whether the conditioning state is optimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondEntropyKind {
    pub family: Family,
    pub optimized: bool,
    pub alpha: f64,
}

impl CondEntropyKind {
    pub fn petz(alpha: f64) -> Self {
        CondEntropyKind {
            family: Family::Petz,
            optimized: false,
            alpha,
        }
    }

    pub fn sandwiched(alpha: f64) -> Self {
        CondEntropyKind {
            family: Family::Sandwiched,
            optimized: false,
            alpha,
        }
    }

    /// The `↑` variant of this kind.
    pub fn up(self) -> Self {
        CondEntropyKind {
            optimized: true,
            ..self
        }
    }

    fn divergence(&self) -> DivergenceKind {
        if (self.alpha - 1.0).abs() < ALPHA_ONE_GUARD {
            return DivergenceKind::Umegaki;
        }
        match self.family {
            Family::Petz => DivergenceKind::Petz(self.alpha),
            Family::Sandwiched => DivergenceKind::Sandwiched(self.alpha),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid!("Rényi order must be positive and finite, got {}", self.alpha));
        }
        Ok(())
    }
}

fn finite(x: crate::ExtendedReal) -> Result<f64> {
    x.finite()
        .ok_or_else(|| precondition!("divergence to I_A ⊗ σ_B is infinite; σ_B misses the support of ρ_B"))
}

/// `(x^p − y^p)/(x − y)`, or the derivative at the midpoint when `x ≈ y`.
fn divided_difference(x: f64, y: f64, p: f64) -> f64 {
    if (x - y).abs() <= 1e-8 * x.max(y) {
        p * (0.5 * (x + y)).powf(p - 1.0)
    } else {
        (x.powf(p) - y.powf(p)) / (x - y)
    }
}

/// `D(ρ_AB ‖ I_A ⊗ σ_B)` with `ρ`'s spectrum precomputed.
struct ConditioningObjective<'a> {
    rho: &'a BipartiteState,
    rho_eig: crate::EigenDecomposition,
    kind: DivergenceKind,
    tol: Tolerances,
    /// `ρ^{1/2}` for sandwiched kinds, `tr_A (ρ/λ_max)^α` for Petz kinds.
    aux: Option<HermitianOperator>,
}

impl<'a> ConditioningObjective<'a> {
    fn new(rho: &'a BipartiteState, kind: DivergenceKind) -> Result<Self> {
        let tol = Tolerances::default();
        let rho_eig = herm_eig_with(rho.rho(), &tol)?;
        rho_eig.check_psd(&tol)?;
        let aux = match kind {
            DivergenceKind::Sandwiched(_) => Some(psd_power(&rho_eig, 0.5, &tol)?),
            DivergenceKind::Petz(a) => {
                let top = rho_eig.max_eigenvalue();
                let thr = rho_eig.support_threshold(&tol);
                let vals: Vec<f64> = rho_eig
                    .eigenvalues()
                    .iter()
                    .map(|&l| if l <= thr { 0.0 } else { (l / top).powf(a) })
                    .collect();
                let scaled = rho_eig.reconstruct(&vals);
                Some(HermitianOperator::from_hermitian(partial_trace(
                    scaled.matrix(),
                    &[rho.dim_a(), rho.dim_b()],
                    &[1],
                )?))
            }
            _ => None,
        };
        Ok(ConditioningObjective {
            rho,
            rho_eig,
            kind,
            tol,
            aux,
        })
    }

    /// Gradient of [`Self::eval`] in `σ_B` at a full-rank `σ_B`.
    ///
    /// Both families reduce to `c · Df(σ_B)[K_B]` for a power `f`, where `Df` is the
    /// Fréchet derivative, evaluated through divided differences in `σ_B`'s eigenbasis.
    fn gradient(&self, sigma_b: &HermitianOperator) -> Result<HermitianOperator> {
        let se = herm_eig_with(sigma_b, &self.tol)?;
        let mu = se.eigenvalues();
        if mu.first().map_or(true, |&m| m <= 0.0) {
            return Err(Error::NonFiniteObjective { at: 0.0 });
        }
        let aux = self
            .aux
            .as_ref()
            .ok_or_else(|| invalid!("no gradient for {:?}", self.kind))?;
        let (alpha, power, k_b, d_log_q) = match self.kind {
            DivergenceKind::Petz(a) => {
                let f_sigma = se.reconstruct(&mu.iter().map(|m| m.powf(1.0 - a)).collect::<Vec<_>>());
                let q = aux.inner(&f_sigma);
                (a, 1.0 - a, aux.clone(), 1.0 / q)
            }
            DivergenceKind::Sandwiched(a) => {
                let p = 1.0 / a - 1.0;
                let sigma_p = se.reconstruct(&mu.iter().map(|m| m.powf(p)).collect::<Vec<_>>());
                let big = HermitianOperator::identity(self.rho.dim_a()).kron(&sigma_p);
                let n = HermitianOperator::from_hermitian(aux.matrix().matmul(big.matrix()).matmul(aux.matrix()));
                let ne = herm_eig_with(&n, &self.tol)?;
                let top = ne.max_eigenvalue();
                let thr = ne.support_threshold(&self.tol);
                let mut q = 0.0;
                let vals: Vec<f64> = ne
                    .eigenvalues()
                    .iter()
                    .map(|&l| {
                        if l <= thr {
                            0.0
                        } else {
                            q += (l / top).powf(a);
                            (l / top).powf(a - 1.0)
                        }
                    })
                    .collect();
                let inner = ne.reconstruct(&vals);
                let k = aux.matrix().matmul(inner.matrix()).matmul(aux.matrix());
                let k_b =
                    HermitianOperator::from_hermitian(partial_trace(&k, &[self.rho.dim_a(), self.rho.dim_b()], &[1])?);
                (a, p, k_b, a / (top * q))
            }
            _ => return Err(invalid!("no gradient for {:?}", self.kind)),
        };
        let v = se.eigenvectors();
        let rotated = k_b.matrix().conjugate_by(&v.adjoint());
        let db = mu.len();
        let mut g = crate::ComplexMatrix::zeros(db, db);
        for i in 0..db {
            for j in 0..db {
                g[(i, j)] = rotated[(i, j)] * divided_difference(mu[i], mu[j], power);
            }
        }
        let scale = d_log_q / ((alpha - 1.0) * core::f64::consts::LN_2);
        Ok(HermitianOperator::from_hermitian(g.conjugate_by(v).scale(scale)))
    }

    fn eval(&self, sigma_b: &HermitianOperator) -> Result<f64> {
        if !sigma_b.matrix().is_finite() {
            return Ok(f64::INFINITY);
        }
        let se = herm_eig_with(sigma_b, &self.tol)?;
        if se.min_eigenvalue() < -self.tol.psd * se.spectral_radius().max(1.0) {
            return Ok(f64::INFINITY);
        }
        let big = identity_tensor_spectrum(self.rho.dim_a(), &se);
        Ok(divergence_from_spectra(self.kind, self.rho.rho(), &self.rho_eig, &big, &self.tol).to_f64())
    }
}

/// `H_α(A|B)`, or `H^↑_α(A|B)` when `kind.optimized`; Petz `↑` uses the closed form, sandwiched `↑` mirror descent.
pub fn cond_entropy(rho: &BipartiteState, kind: CondEntropyKind) -> Result<f64> {
    cond_entropy_with(rho, kind, &SimplexOptimizerConfig::default())
}

pub fn cond_entropy_with(rho: &BipartiteState, kind: CondEntropyKind, config: &SimplexOptimizerConfig) -> Result<f64> {
    kind.validate()?;
    let div = kind.divergence();
    if !kind.optimized || div == DivergenceKind::Umegaki {
        let obj = ConditioningObjective::new(rho, div)?;
        return Ok(-finite(crate::ExtendedReal::from_f64(obj.eval(&rho.marginal_b())?))?);
    }
    match kind.family {
        Family::Petz => petz_up_closed_form(rho, kind.alpha),
        Family::Sandwiched => {
            let starts = default_starts(rho, kind.alpha)?;
            Ok(-minimize_conditioning(rho, kind, &starts, config)?.value)
        }
    }
}

/// `H^↑_α(A|B) = α/(1−α) · log₂ tr[(tr_A ρ^α)^{1/α}]` for Petz divergences.
pub fn petz_up_closed_form(rho: &BipartiteState, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid!("Rényi order must be positive and finite, got {alpha}"));
    }
    if (alpha - 1.0).abs() < ALPHA_ONE_GUARD {
        return cond_entropy(rho, CondEntropyKind::petz(1.0));
    }
    let tol = Tolerances::default();
    let (marg, log_top) = sibson_marginal(rho, alpha, &tol)?;
    let eig = herm_eig_with(&marg, &tol)?;
    let thr = eig.support_threshold(&tol);
    let t: f64 = eig
        .eigenvalues()
        .iter()
        .filter(|&&x| x > thr)
        .map(|&x| x.powf(1.0 / alpha))
        .sum();
    Ok(alpha / (1.0 - alpha) * (t.log2() + log_top))
}

/// `tr_A (ρ/λ_max)^α` together with `log₂ λ_max`; the scaling keeps large orders finite.
fn sibson_marginal(rho: &BipartiteState, alpha: f64, tol: &Tolerances) -> Result<(HermitianOperator, f64)> {
    let eig = herm_eig_with(rho.rho(), tol)?;
    eig.check_psd(tol)?;
    let top = eig.max_eigenvalue();
    if !(top > 0.0) {
        return Err(precondition!("state is zero"));
    }
    let scaled: Vec<f64> = eig.eigenvalues().iter().map(|&x| x / top).collect();
    let eig = crate::EigenDecomposition::from_parts(scaled, eig.eigenvectors().clone());
    let p = psd_power(&eig, alpha, tol)?;
    let marg = partial_trace(p.matrix(), &[rho.dim_a(), rho.dim_b()], &[1])?;
    Ok((HermitianOperator::from_hermitian(marg), top.log2()))
}

/// The minimizer `σ_B ∝ (tr_A ρ^α)^{1/α}` of the Petz divergence `D_α(ρ_AB ‖ I_A ⊗ σ_B)`.
pub fn petz_optimal_sigma(rho: &BipartiteState, alpha: f64) -> Result<HermitianOperator> {
    let tol = Tolerances::default();
    let (marg, _) = sibson_marginal(rho, alpha, &tol)?;
    let s = psd_power(&herm_eig_with(&marg, &tol)?, 1.0 / alpha, &tol)?;
    let tr = s.trace();
    Ok(s.scale(1.0 / tr))
}

/// The marginal `ρ_B` followed by the Petz optimizer, the usual starting points for the `σ_B` search.
pub fn default_starts(rho: &BipartiteState, alpha: f64) -> Result<Vec<HermitianOperator>> {
    let rb = rho.marginal_b();
    let tr = rb.trace();
    let mut starts = alloc::vec![rb.scale(1.0 / tr)];
    if (alpha - 1.0).abs() >= ALPHA_ONE_GUARD {
        starts.push(petz_optimal_sigma(rho, alpha)?);
    }
    Ok(starts)
}

/// `inf_σ D(ρ_AB ‖ I_A ⊗ σ_B)` by mirror descent from the given starting points.
pub fn minimize_conditioning(
    rho: &BipartiteState,
    kind: CondEntropyKind,
    starts: &[HermitianOperator],
    config: &SimplexOptimizerConfig,
) -> Result<OptimizerOutcome> {
    kind.validate()?;
    let div = kind.divergence();
    let monotone = match div {
        DivergenceKind::Sandwiched(a) => a >= 0.5,
        _ => true,
    };
    let restricted = if monotone { restrict_to_support(rho)? } else { None };
    let Some((small, v)) = restricted else {
        return minimize_on(rho, div, starts, config);
    };
    let r = v.cols();
    let small_starts: Vec<HermitianOperator> = starts
        .iter()
        .map(|s| {
            let c = s.conjugate_by(&v.adjoint());
            let tr = c.trace();
            if tr > 0.0 {
                c.scale(1.0 / tr)
            } else {
                HermitianOperator::identity(r).scale(1.0 / r as f64)
            }
        })
        .collect();
    let mut out = minimize_on(&small, div, &small_starts, config)?;
    out.argmin = out.argmin.conjugate_by(&v);
    Ok(out)
}

fn minimize_on(
    rho: &BipartiteState,
    div: DivergenceKind,
    starts: &[HermitianOperator],
    config: &SimplexOptimizerConfig,
) -> Result<OptimizerOutcome> {
    let obj = ConditioningObjective::new(rho, div)?;
    let f = |s: &HermitianOperator| obj.eval(s);
    let g = |s: &HermitianOperator| obj.gradient(s);
    let gradient: Option<&GradientFn<'_>> = if obj.aux.is_some() { Some(&g) } else { None };
    minimize_density_with_gradient(rho.dim_b(), &f, gradient, starts, config)
}

/// `ρ_AB` compressed to `A ⊗ supp ρ_B`, with the isometry `V` onto the support; `None` when `ρ_B` has full rank.
///
/// For divergences obeying data processing the infimum over `σ_B` is attained on `supp ρ_B`, and
/// searching there keeps mirror descent away from the boundary of the full state space.
fn restrict_to_support(rho: &BipartiteState) -> Result<Option<(BipartiteState, ComplexMatrix)>> {
    let tol = Tolerances::default();
    let eig = herm_eig_with(&rho.marginal_b(), &tol)?;
    let thr = eig.support_threshold(&tol);
    let keep: Vec<usize> = (0..eig.dim()).filter(|&k| eig.eigenvalues()[k] > thr).collect();
    if keep.len() == eig.dim() || keep.is_empty() {
        return Ok(None);
    }
    let vecs = eig.eigenvectors();
    let v = ComplexMatrix::from_fn(eig.dim(), keep.len(), |i, j| vecs[(i, keep[j])]);
    let lift = ComplexMatrix::identity(rho.dim_a()).kron(&v);
    let small = rho.rho().conjugate_by(&lift.adjoint());
    Ok(Some((BipartiteState::from_parts(small, rho.dim_a(), keep.len())?, v)))
}

/// `I_α(A⟩B) = −H^↑_α(A|B)` when optimized, `−H_α(A|B)` otherwise.
pub fn coherent_info(rho: &BipartiteState, family: Family, alpha: f64, optimized: bool) -> Result<f64> {
    let kind = CondEntropyKind {
        family,
        optimized,
        alpha,
    };
    Ok(-cond_entropy(rho, kind)?)
}

/// `(H̃_{1+s}(A|C), −H^↑_{1/(1+s)}(A|B))` for a pure state on `A B C`; the two agree by duality.
pub fn duality_pair(psi: &MultipartiteState, a: &str, b: &str, c: &str, s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(invalid!("s must lie in (0, 1], got {s}"));
    }
    psi.check_pure(1e-8)?;
    let ac = psi.bipartition(&[a], &[c])?;
    let ab = psi.bipartition(&[a], &[b])?;
    let left = cond_entropy(&ac, CondEntropyKind::sandwiched(1.0 + s))?;
    let right = -petz_up_closed_form(&ab, 1.0 / (1.0 + s))?;
    Ok((left, right))
}

/// `ρ_{ĀB} = (id ⊗ N)(φ)` for the purification `φ` of input density `τ`: `din (√τ̄ ⊗ I) ω (√τ̄ ⊗ I)†`.
pub fn channel_state(ch: &QuantumChannel, tau: &HermitianOperator) -> Result<BipartiteState> {
    if tau.dim() != ch.din() {
        return Err(Error::DimensionMismatch {
            expected: ch.din(),
            found: tau.dim(),
        });
    }
    let tol = Tolerances::default();
    let root = psd_power(&herm_eig_with(tau, &tol)?, 0.5, &tol)?;
    let k = root.matrix().conj().kron(&crate::ComplexMatrix::identity(ch.dout()));
    let m = k.matmul(ch.choi().matrix()).matmul(&k.adjoint()).scale(ch.din() as f64);
    BipartiteState::from_parts(HermitianOperator::from_hermitian(m), ch.din(), ch.dout())
}

/// Result of a channel coherent-information search.
#[derive(Debug, Clone)]
pub struct ChannelCoherentInfo {
    pub value: f64,
    /// Input density `τ` of the best purified input found.
    pub input: HermitianOperator,
}

/// `max_φ I_α(Ā⟩B)_{(id⊗N)(φ)}` over purified inputs, by multi-start ascent over the input density.
///
/// The maximally entangled input is always the first start; `restarts` random starts follow.
pub fn channel_coherent_info(
    ch: &QuantumChannel,
    family: Family,
    alpha: f64,
    restarts: usize,
    rng: &mut impl RngCore,
) -> Result<ChannelCoherentInfo> {
    let d = ch.din();
    let kind = CondEntropyKind {
        family,
        optimized: true,
        alpha,
    };
    kind.validate()?;
    let objective = |tau: &HermitianOperator| -> Result<f64> {
        let tr = tau.trace();
        let st = channel_state(ch, &tau.scale(1.0 / tr))?;
        cond_entropy(&st, kind)
    };
    let config = SimplexOptimizerConfig {
        restarts: restarts + 1,
        seed: rng.next_u64(),
        max_iters: 2000,
        ..SimplexOptimizerConfig::default()
    };
    let phi_input = HermitianOperator::identity(d).scale(1.0 / d as f64);
    let at_phi = -objective(&phi_input)?;
    let best = match minimize_density(d, &objective, core::slice::from_ref(&phi_input), &config) {
        Ok(out) => out,
        Err(Error::OptimizerNoConvergence { .. }) => {
            return Ok(ChannelCoherentInfo {
                value: at_phi,
                input: phi_input,
            })
        }
        Err(e) => return Err(e),
    };
    if -best.value >= at_phi {
        Ok(ChannelCoherentInfo {
            value: -best.value,
            input: best.argmin,
        })
    } else {
        Ok(ChannelCoherentInfo {
            value: at_phi,
            input: phi_input,
        })
    }
}

/// `(1/m) F(ρ^{⊗m})` for a conditional entropy `F`.
pub fn tensor_power_entropy(rho: &BipartiteState, kind: CondEntropyKind, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(invalid!("tensor power must be at least 1"));
    }
    let dim = (rho.dim_a() * rho.dim_b()) as u128;
    let total = (0..m)
        .try_fold(1u128, |acc, _| acc.checked_mul(dim))
        .unwrap_or(u128::MAX);
    if total > TENSOR_POWER_DIM_LIMIT as u128 {
        return Err(Error::MemoryBudget {
            dim: total.min(usize::MAX as u128) as usize,
            limit: TENSOR_POWER_DIM_LIMIT,
        });
    }
    Ok(cond_entropy(&rho.tensor_power(m), kind)? / m as f64)
}
