//! The decoupling error `E_U D(T(UρU†) ‖ ω_C ⊗ ρ_E)`, its Monte Carlo
//! estimation, and one-shot bounds on it.
//!
//! Sampled errors are in bits, like every divergence in this crate. The
//! one-shot bounds control the error measured in nats; use
//! [`MCEstimate::mean_nats`] when comparing against them.

use alloc::vec::Vec;

use rand::Rng;

use crate::channel::QuantumChannel;
use crate::divergence::{sandwiched_quasi, umegaki};
use crate::error::{invalid, precondition, Error, Result};
use crate::extended::ExtendedReal;
use crate::haar::haar_unitary;
use crate::hermitian::{distinct_eigenvalue_count, mat_func, positive_part_trace, HermitianOperator};
use crate::matrix::ComplexMatrix;
use crate::rng::SeededRng;
use crate::search::{sup_concave, SearchConfig};
use crate::state::{random_density, BipartiteState};
#[allow(unused_imports)]
use crate::Float;

const LN_2: f64 = core::f64::consts::LN_2;

/// Smallest `s` used where a bound or exponent is optimized over `(0, 1]`.
pub const S_FLOOR: f64 = 1e-4;

/// A state `ρ_AE` together with a completely positive, trace non-increasing map on `A`.
#[derive(Debug, Clone)]
pub struct DecouplingInstance {
    rho: BipartiteState,
    channel: QuantumChannel,
    omega_c: HermitianOperator,
    target: HermitianOperator,
}

impl DecouplingInstance {
    pub fn new(rho: BipartiteState, channel: QuantumChannel) -> Result<Self> {
        if channel.din() != rho.dim_a() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim_a(),
                found: channel.din(),
            });
        }
        let omega_c = channel.output_of_maximally_mixed();
        let target = omega_c.kron(&rho.marginal_b());
        Ok(DecouplingInstance {
            rho,
            channel,
            omega_c,
            target,
        })
    }

    /// Standard decoupling: the partial trace over `A2` of `A = A1 ⊗ A2`.
    pub fn standard(rho: BipartiteState, d_a1: usize, d_a2: usize) -> Result<Self> {
        if d_a1 * d_a2 != rho.dim_a() {
            return Err(invalid!("{d_a1} x {d_a2} does not factor dim A = {}", rho.dim_a()));
        }
        Self::new(rho, QuantumChannel::partial_trace(d_a1, d_a2))
    }

    pub fn state(&self) -> &BipartiteState {
        &self.rho
    }

    pub fn channel(&self) -> &QuantumChannel {
        &self.channel
    }

    /// `ω_C = T(I_A / |A|)`.
    pub fn omega_c(&self) -> &HermitianOperator {
        &self.omega_c
    }
}

/// `D(T(U ρ_AE U†) ‖ ω_C ⊗ ρ_E)` in bits for one unitary `U` on `A`.
pub fn decoupling_error_sample(inst: &DecouplingInstance, u: &ComplexMatrix) -> Result<ExtendedReal> {
    let da = inst.rho.dim_a();
    let de = inst.rho.dim_b();
    if u.rows() != da || u.cols() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: u.rows(),
        });
    }
    let full = u.kron(&ComplexMatrix::identity(de));
    let rotated = inst.rho.rho().matrix().conjugate_by(&full);
    let out = inst.channel.apply_operator(&rotated, de)?;
    umegaki(&HermitianOperator::from_hermitian(out.hermitian_part()), &inst.target)
}

/// The `index`-th Monte Carlo sample: a Haar unitary drawn from substream `index` of `base`.
pub fn decoupling_sample_at(inst: &DecouplingInstance, base: &SeededRng, index: u64) -> Result<ExtendedReal> {
    let mut rng = base.substream(index);
    let u = haar_unitary(inst.rho.dim_a(), &mut rng);
    decoupling_error_sample(inst, &u)
}

/// Sample mean and standard error of the decoupling error, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    /// `+∞` when any sample was infinite.
    pub mean: ExtendedReal,
    /// Sample standard deviation over `√n`; infinite alongside `mean`.
    pub stderr: f64,
    pub n_samples: usize,
    pub infinite_samples: usize,
    pub seed: u64,
    pub per_sample_values: Option<Vec<ExtendedReal>>,
}

impl MCEstimate {
    /// Aggregates samples in index order.
    pub fn from_samples(values: &[ExtendedReal], seed: u64, keep_values: bool) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(invalid!("at least 2 samples are required, got {n}"));
        }
        let infinite = values.iter().filter(|v| !v.is_finite()).count();
        let (mean, stderr) = if infinite > 0 {
            (ExtendedReal::PositiveInfinity, f64::INFINITY)
        } else {
            let xs: Vec<f64> = values.iter().map(|v| v.to_f64()).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
            (ExtendedReal::Finite(mean), (var / n as f64).sqrt())
        };
        Ok(MCEstimate {
            mean,
            stderr,
            n_samples: n,
            infinite_samples: infinite,
            seed,
            per_sample_values: keep_values.then(|| values.to_vec()),
        })
    }

    pub fn is_infinite(&self) -> bool {
        self.infinite_samples > 0
    }

    /// `(mean, stderr)` converted to nats.
    pub fn mean_nats(&self) -> (f64, f64) {
        (self.mean.to_f64() * LN_2, self.stderr * LN_2)
    }
}

/// Haar Monte Carlo estimate of the decoupling error from `n_samples` independent substreams of `rng`.
pub fn mc_decoupling_error(inst: &DecouplingInstance, n_samples: usize, rng: &SeededRng) -> Result<MCEstimate> {
    if n_samples < 2 {
        return Err(invalid!("at least 2 samples are required, got {n_samples}"));
    }
    let values = (0..n_samples as u64)
        .map(|i| decoupling_sample_at(inst, rng, i))
        .collect::<Result<Vec<_>>>()?;
    MCEstimate::from_samples(&values, rng.seed(), false)
}

/// `c_s = s^s (1 − s)^{1−s}` with `c_0 = c_1 = 1`.
pub fn c_s(s: f64) -> f64 {
    let xlx = |x: f64| if x <= 0.0 { 0.0 } else { x * x.ln() };
    (xlx(s) + xlx(1.0 - s)).exp()
}

/// `2^{−s H̃_{1+s}(A|B)}` for a possibly sub-normalized `ρ_AB`, i.e. `Q̃_{1+s}(ρ_AB ‖ I_A ⊗ ρ_B)`.
fn conditional_quasi(rho: &BipartiteState, s: f64) -> Result<f64> {
    let sigma = rho.identity_a_tensor(&rho.marginal_b());
    sandwiched_quasi(rho.rho(), &sigma, 1.0 + s)
}

fn choi_state(ch: &QuantumChannel) -> Result<BipartiteState> {
    BipartiteState::from_parts(ch.choi().clone(), ch.din(), ch.dout())
}

/// `(c_s / s) 2^{−s H̃_{1+s}(A|E)_ρ − s H̃_{1+s}(A'|C)_ω}` with `ω_{A'C} = T(Φ_{A'A})`.
///
/// Bounds the decoupling error in nats. For trace non-increasing maps the
/// entropy of `ω` is taken without normalization.
pub fn one_shot_upper_bound(inst: &DecouplingInstance, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(invalid!("s must lie in (0, 1], got {s}"));
    }
    let q_rho = conditional_quasi(&inst.rho, s)?;
    let q_omega = conditional_quasi(&choi_state(&inst.channel)?, s)?;
    Ok(c_s(s) / s * q_rho * q_omega)
}

/// Minimum of [`one_shot_upper_bound`] over `s ∈ [S_FLOOR, 1]`, with the minimizing `s`.
pub fn one_shot_upper_bound_optimized(inst: &DecouplingInstance) -> Result<(f64, f64)> {
    let omega = choi_state(&inst.channel)?;
    // The logarithm of the bound is convex in s.
    let f = |s: f64| -> Result<f64> {
        let q = conditional_quasi(&inst.rho, s)? * conditional_quasi(&omega, s)?;
        Ok(-(c_s(s) / s * q).ln())
    };
    let out = sup_concave(&f, S_FLOOR, 1.0, &SearchConfig::default())?;
    Ok(((-out.sup).exp(), out.argmax))
}

/// `(1/v) tr(ρ_AE − 9 v (|A2|/|A1|) I_A ⊗ ρ_E)_+` with `v` the number of distinct eigenvalues of `ρ_E`.
///
/// Lower-bounds the decoupling error of `tr_{A2}` in nats.
pub fn partial_trace_lower_bound(rho: &BipartiteState, d_a1: usize, d_a2: usize) -> Result<f64> {
    if d_a1 * d_a2 != rho.dim_a() {
        return Err(invalid!("{d_a1} x {d_a2} does not factor dim A = {}", rho.dim_a()));
    }
    let rho_e = rho.marginal_b();
    let v = distinct_eigenvalue_count(&rho_e)? as f64;
    let scaled = rho.identity_a_tensor(&rho_e).scale(9.0 * v * d_a2 as f64 / d_a1 as f64);
    Ok(positive_part_trace(&rho.rho().sub(&scaled))? / v)
}

/// `(c_s / s) (|Ã|^{1+s} / |A|) 2^{−s H̃_{1+s}(A|R)}` for a partial isometry into a space of dimension `d_tilde`.
pub fn partial_isometry_bound(rho: &BipartiteState, d_tilde: usize, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid!("s must lie in (0, 1), got {s}"));
    }
    if d_tilde == 0 || d_tilde > rho.dim_a() {
        return Err(invalid!("target dimension {d_tilde} must lie in 1..={}", rho.dim_a()));
    }
    let q = conditional_quasi(rho, s)?;
    Ok(c_s(s) / s * (d_tilde as f64).powf(1.0 + s) / rho.dim_a() as f64 * q)
}

/// The map `X ↦ V X V†` for `V = Σ_{i < d_tilde} |i⟩⟨i|` from `A` onto a `d_tilde`-dimensional space.
pub fn partial_isometry_channel(d_a: usize, d_tilde: usize) -> Result<QuantumChannel> {
    if d_tilde == 0 || d_tilde > d_a {
        return Err(invalid!("target dimension {d_tilde} must lie in 1..={d_a}"));
    }
    let v = ComplexMatrix::from_fn(d_tilde, d_a, |c, i| {
        if c == i {
            crate::matrix::ONE
        } else {
            crate::matrix::ZERO
        }
    });
    QuantumChannel::from_kraus(&[v])
}

/// Both sides of `tr ρ(ln(ρ + σ) − ln σ) ≤ (c_s / s) Q̃_{1+s}(ρ‖σ)`.
///
/// The left side uses the natural logarithm.
pub fn sharp_trace_inequality(rho: &HermitianOperator, sigma: &HermitianOperator, s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(invalid!("s must lie in (0, 1], got {s}"));
    }
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let rhs = c_s(s) / s * sandwiched_quasi(rho, sigma, 1.0 + s)?;
    if !rhs.is_finite() {
        return Err(precondition!("supp ρ is not contained in supp σ"));
    }
    let log_sum = mat_func(&rho.add(sigma), f64::ln, 0.0)?;
    let log_sigma = mat_func(sigma, f64::ln, 0.0)?;
    let lhs = rho.inner(&log_sum.sub(&log_sigma));
    Ok((lhs, rhs))
}

/// Largest violations found by [`check_positive_part_inequalities`].
#[derive(Debug, Clone, PartialEq)]
pub struct PositivePartReport {
    pub samples: usize,
    /// `max(Σ_x tr(A_x − λI)_+ − tr(Σ_x A_x − λI)_+)`.
    pub superadditivity_violation: f64,
    /// `max(tr(ρ − 9σ)_+ − D(ρ‖σ))` with `D` in nats.
    pub relative_entropy_violation: f64,
}

/// Checks `tr(Σ A_x − λI)_+ ≥ Σ tr(A_x − λI)_+` and `D(ρ‖σ) ≥ tr(ρ − 9σ)_+` on random instances of dimension ≤ 8.
pub fn check_positive_part_inequalities(samples: usize, rng: &SeededRng) -> Result<PositivePartReport> {
    if samples == 0 {
        return Err(invalid!("at least one sample is required"));
    }
    let mut sup_viol = f64::NEG_INFINITY;
    let mut re_viol = f64::NEG_INFINITY;
    for i in 0..samples as u64 {
        let mut r = rng.substream(i);
        let d = r.gen_range(1..=8usize);
        let terms = r.gen_range(1..=4usize);
        let ops = (0..terms)
            .map(|_| {
                let rank = r.gen_range(1..=d);
                let scale = r.gen_range(0.1..3.0);
                Ok(random_density(d, rank, &mut r)?.density().scale(scale))
            })
            .collect::<Result<Vec<_>>>()?;
        let lambda = r.gen_range(0.01..1.0);
        let shift = HermitianOperator::identity(d).scale(lambda);
        let mut sum = HermitianOperator::zeros(d);
        let mut separate = 0.0;
        for a in &ops {
            sum = sum.add(a);
            separate += positive_part_trace(&a.sub(&shift))?;
        }
        sup_viol = sup_viol.max(separate - positive_part_trace(&sum.sub(&shift))?);

        let rho_rank = r.gen_range(1..=d);
        let rho = random_density(d, rho_rank, &mut r)?;
        let sigma = random_density(d, d, &mut r)?;
        let div = umegaki(rho.density(), sigma.density())?.to_f64() * LN_2;
        let pp = positive_part_trace(&rho.density().sub(&sigma.density().scale(9.0)))?;
        re_viol = re_viol.max(pp - div);
    }
    Ok(PositivePartReport {
        samples,
        superadditivity_violation: sup_viol,
        relative_entropy_violation: re_viol,
    })
}
