//! Error exponents as suprema over `s` of Rényi-entropy expressions.
//!
//! Achievable exponents are suprema over `s ∈ (0, 1)`, evaluated on
//! `[S_FLOOR, 1]`; converse exponents extend the range to `(0, S_max]`, where
//! `S_max` doubles from 1 until the objective's slope turns negative or
//! reaches [`S_MAX_CAP`]. Reported exponents are clamped at zero; the raw
//! suprema are kept alongside.

use alloc::vec::Vec;

use rand::RngCore;

use crate::channel::QuantumChannel;
use crate::condentropy::{
    channel_coherent_info, channel_state, cond_entropy, cond_entropy_with, petz_up_closed_form, CondEntropyKind, Family,
};
use crate::decoupling::{DecouplingInstance, S_FLOOR};
use crate::divergence::sandwiched_quasi;
use crate::error::{invalid, precondition, Result};
use crate::hermitian::HermitianOperator;
use crate::optimize::SimplexOptimizerConfig;
use crate::rng::SeededRng;
use crate::search::{sup_concave, SearchConfig, SearchOutcome};
use crate::state::{BipartiteState, MultipartiteState};
#[allow(unused_imports)]
use crate::Float;

/// Largest `S_max` tried when bracketing a converse supremum.
pub const S_MAX_CAP: f64 = 64.0;

/// Step of the central difference used for every derivative threshold.
pub const FD_STEP: f64 = 1e-4;

/// Grid and supremum of one objective `f(s)`.
#[derive(Debug, Clone)]
pub struct ExponentCurve {
    pub grid: Vec<(f64, f64)>,
    pub argmax_s: f64,
    /// Raw supremum; may be slightly negative when no positive exponent exists.
    pub sup_value: f64,
}

impl ExponentCurve {
    fn from_search(out: SearchOutcome, scale: f64) -> Self {
        ExponentCurve {
            grid: out.grid.into_iter().map(|(s, v)| (s, scale * v)).collect(),
            argmax_s: out.argmax,
            sup_value: scale * out.sup,
        }
    }

    /// `max(0, sup_value)`.
    pub fn exponent(&self) -> f64 {
        self.sup_value.max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentResult {
    pub achievable: f64,
    /// `+∞` when no single-letter converse is available.
    pub converse: f64,
    pub raw_achievable: f64,
    pub raw_converse: f64,
    /// The rate threshold returned by the derivative scheme for this task.
    pub critical_rate: f64,
    /// Rate on the boundary of the exact regime.
    pub exactness_threshold: f64,
    pub exact: bool,
    pub argmax_s: f64,
    /// Upper end of the converse range.
    pub s_max: f64,
    /// The converse bracket hit [`S_MAX_CAP`]; `converse` is then only a lower estimate of the supremum.
    pub converse_capped: bool,
}

/// `g'(1)` by a central difference with step [`FD_STEP`] and one Richardson extrapolation.
pub fn derivative_at_one(g: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    derivative_at(g, 1.0, FD_STEP)
}

fn central(g: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((g(x + h)? - g(x - h)?) / (2.0 * h))
}

fn derivative_at(g: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let coarse = central(g, x, h)?;
    let fine = central(g, x, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Suprema of `scale · f` over `[S_FLOOR, 1]` and over `[S_FLOOR, S_max]`.
struct Suprema {
    achievable: ExponentCurve,
    converse: ExponentCurve,
    s_max: f64,
    capped: bool,
}

fn suprema(f: &dyn Fn(f64) -> Result<f64>, scale: f64) -> Result<Suprema> {
    let cfg = SearchConfig::default();
    let achievable = ExponentCurve::from_search(sup_concave(f, S_FLOOR, 1.0, &cfg)?, scale);
    let mut s_max = 1.0;
    let mut slope = derivative_at(f, s_max, FD_STEP * s_max)?;
    while slope >= 0.0 && s_max < S_MAX_CAP {
        s_max *= 2.0;
        slope = derivative_at(f, s_max, FD_STEP * s_max)?;
    }
    let capped = slope >= 0.0;
    let converse = if s_max == 1.0 {
        achievable.clone()
    } else {
        let mut c = ExponentCurve::from_search(sup_concave(f, S_FLOOR, s_max, &cfg)?, scale);
        // The converse range contains the achievable one.
        if c.sup_value < achievable.sup_value {
            c.sup_value = achievable.sup_value;
            c.argmax_s = achievable.argmax_s;
        }
        c
    };
    Ok(Suprema {
        achievable,
        converse,
        s_max,
        capped,
    })
}

fn sandwiched_cond(rho: &BipartiteState, alpha: f64) -> Result<f64> {
    cond_entropy(rho, CondEntropyKind::sandwiched(alpha))
}

/// `R_critical = d/ds(−½ s H̃_{1+s}(A|E))` at `s = 1`, in bits.
pub fn critical_rate(rho_ae: &BipartiteState) -> Result<f64> {
    let g = |s: f64| -> Result<f64> { Ok(-0.5 * s * sandwiched_cond(rho_ae, 1.0 + s)?) };
    derivative_at_one(&g)
}

/// Largest rate at which the standard decoupling exponents coincide: `R_critical + ½ log|A|`.
pub fn exactness_threshold(rho_ae: &BipartiteState) -> Result<f64> {
    Ok(critical_rate(rho_ae)? + 0.5 * (rho_ae.dim_a() as f64).log2())
}

/// `sup_{0<s<1} s(H̃_{1+s}(A|E)_ρ + H̃_{1+s}(A'|C)_ω)` for a general decoupling map.
pub fn decoupling_achievable_exponent(inst: &DecouplingInstance) -> Result<ExponentCurve> {
    let ch = inst.channel();
    let omega = BipartiteState::from_parts(ch.choi().clone(), ch.din(), ch.dout())?;
    let rho = inst.state();
    let f = |s: f64| -> Result<f64> {
        let q_omega = sandwiched_quasi(omega.rho(), &omega.identity_a_tensor(&omega.marginal_b()), 1.0 + s)?;
        Ok(s * sandwiched_cond(rho, 1.0 + s)? - q_omega.log2())
    };
    Ok(ExponentCurve::from_search(
        sup_concave(&f, S_FLOOR, 1.0, &SearchConfig::default())?,
        1.0,
    ))
}

/// Achievable and converse exponents of standard decoupling at rate `r` (`|A2| = 2^{r}` per copy).
pub fn standard_decoupling_exponents(rho_ae: &BipartiteState, r: f64) -> Result<ExponentResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid!("rate must be positive, got {r}"));
    }
    let log_a = (rho_ae.dim_a() as f64).log2();
    let f = |s: f64| -> Result<f64> { Ok(s * (2.0 * r - log_a + sandwiched_cond(rho_ae, 1.0 + s)?)) };
    let sup = suprema(&f, 1.0)?;
    let crit = critical_rate(rho_ae)?;
    let threshold = crit + 0.5 * log_a;
    Ok(result(sup, crit, threshold, r <= threshold))
}

fn result(sup: Suprema, critical_rate: f64, threshold: f64, exact: bool) -> ExponentResult {
    ExponentResult {
        achievable: sup.achievable.exponent(),
        converse: sup.converse.exponent(),
        raw_achievable: sup.achievable.sup_value,
        raw_converse: sup.converse.sup_value,
        critical_rate,
        exactness_threshold: threshold,
        exact,
        argmax_s: sup.achievable.argmax_s,
        s_max: sup.s_max,
        converse_capped: sup.capped,
    }
}

fn achievable_only(curve: ExponentCurve, threshold: f64) -> ExponentResult {
    ExponentResult {
        achievable: curve.exponent(),
        converse: f64::INFINITY,
        raw_achievable: curve.sup_value,
        raw_converse: f64::INFINITY,
        critical_rate: threshold,
        exactness_threshold: threshold,
        exact: false,
        argmax_s: curve.argmax_s,
        s_max: 1.0,
        converse_capped: false,
    }
}

/// `½ sup_{0<s<1} s(2r − log|A| + H̃↑_{1/(1−s)}(A|E))`, the exponent obtained through trace distance.
///
/// The `σ_E` optimization is numeric; the upper end of the range is `1 − S_FLOOR`.
pub fn trace_distance_comparator_exponent(
    rho_ae: &BipartiteState,
    r: f64,
    config: &SimplexOptimizerConfig,
) -> Result<ExponentCurve> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid!("rate must be positive, got {r}"));
    }
    let log_a = (rho_ae.dim_a() as f64).log2();
    let f = |s: f64| -> Result<f64> {
        let h = cond_entropy_with(rho_ae, CondEntropyKind::sandwiched(1.0 / (1.0 - s)).up(), config)?;
        Ok(s * (2.0 * r - log_a + h))
    };
    Ok(ExponentCurve::from_search(
        sup_concave(&f, S_FLOOR, 1.0 - S_FLOOR, &SearchConfig::default())?,
        0.5,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergingMode {
    /// Entanglement is distilled at rate `r`.
    Distill,
    /// Entanglement is consumed at rate `r`.
    Cost,
}

/// Merging exponents together with the largest disagreement between the two entropy routes.
#[derive(Debug, Clone, PartialEq)]
pub struct MergingResult {
    pub exponents: ExponentResult,
    /// `max_s |H̃_{1+s}(A|R) + H↑_{1/(1+s)}(A|B)|` over the checked points.
    pub duality_gap: f64,
}

/// `½ sup_s s(H̃_{1+s}(A|R) ∓ r)` for a pure state on `A B R`.
pub fn merging_exponents(
    psi: &MultipartiteState,
    labels: (&str, &str, &str),
    r: f64,
    mode: MergingMode,
) -> Result<MergingResult> {
    let (a, b, rl) = labels;
    psi.check_pure(1e-8)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid!("rate must be non-negative, got {r}"));
    }
    let ar = psi.bipartition(&[a], &[rl])?;
    let ab = psi.bipartition(&[a], &[b])?;
    let h = cond_entropy(&ar, CondEntropyKind::petz(1.0))?;
    let sign = match mode {
        MergingMode::Distill => {
            if !(h > 0.0 && r > 0.0 && r < h) {
                return Err(precondition!(
                    "distillation needs H(A|R) > 0 and 0 < r < H(A|R); got H(A|R) = {h}, r = {r}"
                ));
            }
            -1.0
        }
        MergingMode::Cost => {
            if !(h < 0.0 && r > -h) {
                return Err(precondition!(
                    "cost mode needs H(A|R) < 0 and r > −H(A|R); got H(A|R) = {h}, r = {r}"
                ));
            }
            1.0
        }
    };
    let f = |s: f64| -> Result<f64> { Ok(s * (sandwiched_cond(&ar, 1.0 + s)? + sign * r)) };
    let sup = suprema(&f, 0.5)?;
    let slope = derivative_at_one(&f)?;
    let mut gap: f64 = 0.0;
    let mut points: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    points.push(sup.achievable.argmax_s);
    for s in points {
        let left = sandwiched_cond(&ar, 1.0 + s)?;
        let right = -petz_up_closed_form(&ab, 1.0 / (1.0 + s))?;
        gap = gap.max((left - right).abs());
    }
    // f'(1) ≤ 0 places the unconstrained maximizer in (0, 1].
    let g = |s: f64| -> Result<f64> { Ok(s * sandwiched_cond(&ar, 1.0 + s)?) };
    let threshold = derivative_at_one(&g)?;
    let exponents = result(sup, threshold, threshold, slope <= 0.0);
    Ok(MergingResult {
        exponents,
        duality_gap: gap,
    })
}

/// True when `ρ` is supported on `span{|x⟩|x⟩}` in the computational bases.
pub fn is_maximally_correlated(rho: &BipartiteState, tolerance: f64) -> bool {
    let d = rho.dim_a();
    if d != rho.dim_b() {
        return false;
    }
    let m = rho.rho().matrix();
    for row in 0..d * d {
        for col in 0..d * d {
            let diag_pair = row % (d + 1) == 0 && col % (d + 1) == 0;
            if !diag_pair && m[(row, col)].norm() > tolerance {
                return false;
            }
        }
    }
    true
}

/// `s ↦ I_{1/(1+s)}(C⟩D)`, the Petz coherent information.
fn petz_coherent(rho: &BipartiteState, s: f64) -> Result<f64> {
    Ok(-petz_up_closed_form(rho, 1.0 / (1.0 + s))?)
}

/// `½ sup_{0<s<1} s(I_{1/(1+s)}(C⟩D) − r)` at blocklength one with identity preprocessing.
///
/// For maximally correlated states the converse `½ sup_{s>0}` is also evaluated
/// and the result is exact above the rate `d/ds[s I_{1/(1+s)}]` at `s = 1`.
pub fn distillation_exponent_single_letter(rho_cd: &BipartiteState, r: f64) -> Result<ExponentResult> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid!("rate must be non-negative, got {r}"));
    }
    let f = |s: f64| -> Result<f64> { Ok(s * (petz_coherent(rho_cd, s)? - r)) };
    let g = |s: f64| -> Result<f64> { Ok(s * petz_coherent(rho_cd, s)?) };
    let threshold = derivative_at_one(&g)?;
    if is_maximally_correlated(rho_cd, 1e-12) {
        let sup = suprema(&f, 0.5)?;
        Ok(result(sup, threshold, threshold, r >= threshold))
    } else {
        let curve = ExponentCurve::from_search(sup_concave(&f, S_FLOOR, 1.0, &SearchConfig::default())?, 0.5);
        Ok(achievable_only(curve, threshold))
    }
}

/// Coding exponent `½ sup_s s(I_{1/(1+s)} − r)` of a channel at blocklength one.
///
/// With `dephasing`, the channel must be a generalized dephasing channel; the input
/// is fixed to `Φ`, the converse is evaluated, and the result is exact above the
/// derivative threshold. Otherwise the coherent information is maximized over inputs
/// with `restarts` random starts per `s`, and no converse is reported.
pub fn channel_coding_exponent(
    ch: &QuantumChannel,
    r: f64,
    restarts: usize,
    rng: &mut impl RngCore,
    dephasing: bool,
) -> Result<ExponentResult> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid!("rate must be non-negative, got {r}"));
    }
    if dephasing {
        let d = ch.din();
        let phi_out = channel_state(ch, &HermitianOperator::identity(d).scale(1.0 / d as f64))?;
        if d != ch.dout() || !ch.is_trace_preserving() || !is_maximally_correlated(&phi_out, 1e-12) {
            return Err(precondition!("channel is not a generalized dephasing channel"));
        }
        let f = |s: f64| -> Result<f64> { Ok(s * (petz_coherent(&phi_out, s)? - r)) };
        let g = |s: f64| -> Result<f64> { Ok(s * petz_coherent(&phi_out, s)?) };
        let threshold = derivative_at_one(&g)?;
        let sup = suprema(&f, 0.5)?;
        return Ok(result(sup, threshold, threshold, r >= threshold));
    }
    let seed = rng.next_u64();
    let coherent = |s: f64| -> Result<f64> {
        let mut local = SeededRng::new(seed, 0);
        Ok(channel_coherent_info(ch, Family::Petz, 1.0 / (1.0 + s), restarts, &mut local)?.value)
    };
    let f = |s: f64| -> Result<f64> { Ok(s * (coherent(s)? - r)) };
    let g = |s: f64| -> Result<f64> { Ok(s * coherent(s)?) };
    let threshold = derivative_at_one(&g)?;
    let curve = ExponentCurve::from_search(sup_concave(&f, S_FLOOR, 1.0, &SearchConfig::default())?, 0.5);
    Ok(achievable_only(curve, threshold))
}
