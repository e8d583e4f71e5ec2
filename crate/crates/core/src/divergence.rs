//! Quantum relative entropies: Umegaki, Petz and sandwiched Rényi, and `D_max`.
//!
//! Values are in bits. A support violation yields `+∞` rather than an error;
//! errors are reserved for malformed arguments.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::extended::ExtendedReal;
use crate::hermitian::{herm_eig_with, EigenDecomposition, HermitianOperator};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// `|α − 1|` below which a Rényi order is evaluated as the Umegaki limit.
pub const ALPHA_ONE_GUARD: f64 = 1e-6;

/// Which divergence to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceKind {
    Umegaki,
    Petz(f64),
    Sandwiched(f64),
    Max,
}

impl DivergenceKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DivergenceKind::Petz(a) | DivergenceKind::Sandwiched(a) => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(invalid!("Rényi order must be positive and finite, got {a}"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `D(ρ‖σ)` with the default tolerances.
    pub fn evaluate(&self, rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtendedReal> {
        self.evaluate_with(rho, sigma, &Tolerances::default())
    }

    pub fn evaluate_with(
        &self,
        rho: &HermitianOperator,
        sigma: &HermitianOperator,
        tol: &Tolerances,
    ) -> Result<ExtendedReal> {
        self.validate()?;
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: sigma.dim(),
            });
        }
        let re = herm_eig_with(rho, tol)?;
        re.check_psd(tol)?;
        let se = herm_eig_with(sigma, tol)?;
        se.check_psd(tol)?;
        Ok(divergence_from_spectra(*self, rho, &re, &se, tol))
    }
}

pub fn umegaki(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtendedReal> {
    DivergenceKind::Umegaki.evaluate(rho, sigma)
}

pub fn petz_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<ExtendedReal> {
    DivergenceKind::Petz(alpha).evaluate(rho, sigma)
}

pub fn sandwiched_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<ExtendedReal> {
    DivergenceKind::Sandwiched(alpha).evaluate(rho, sigma)
}

pub fn d_max(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtendedReal> {
    DivergenceKind::Max.evaluate(rho, sigma)
}

/// The sandwiched quasi-entropy `Q̃_α(ρ‖σ) = tr(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α`, `+∞` on a support violation for `α > 1`.
pub fn sandwiched_quasi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    DivergenceKind::Sandwiched(alpha).validate()?;
    let tol = Tolerances::default();
    let re = herm_eig_with(rho, &tol)?;
    let se = herm_eig_with(sigma, &tol)?;
    Ok(sandwiched_log_q(rho, &re, &se, alpha, &tol).exp2())
}

/// `ρ` expressed in the eigenbasis of `σ`: `W† ρ W`.
fn in_basis(rho: &HermitianOperator, sigma: &EigenDecomposition) -> ComplexMatrix {
    let w = sigma.eigenvectors();
    w.adjoint().matmul(rho.matrix()).matmul(w)
}

fn support_mask(eig: &EigenDecomposition, tol: &Tolerances) -> Vec<bool> {
    let thr = eig.support_threshold(tol);
    eig.eigenvalues().iter().map(|&x| x > thr).collect()
}

/// `tr((I − Π_σ) ρ)` from `ρ` written in σ's eigenbasis.
fn mass_outside(rho_w: &ComplexMatrix, mask: &[bool]) -> f64 {
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| !m)
        .map(|(k, _)| rho_w[(k, k)].re)
        .sum::<f64>()
        .max(0.0)
}

fn mass_inside(rho_w: &ComplexMatrix, mask: &[bool]) -> f64 {
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(k, _)| rho_w[(k, k)].re)
        .sum::<f64>()
        .max(0.0)
}

fn psd_trace(eig: &EigenDecomposition, tol: &Tolerances) -> f64 {
    let thr = eig.support_threshold(tol);
    eig.eigenvalues().iter().filter(|&&x| x > thr).sum()
}

/// Evaluates a divergence from precomputed spectra of `ρ` and `σ`.
pub(crate) fn divergence_from_spectra(
    kind: DivergenceKind,
    rho: &HermitianOperator,
    rho_eig: &EigenDecomposition,
    sigma_eig: &EigenDecomposition,
    tol: &Tolerances,
) -> ExtendedReal {
    let tr_rho = psd_trace(rho_eig, tol);
    match kind {
        DivergenceKind::Umegaki => umegaki_impl(rho, rho_eig, sigma_eig, tol),
        DivergenceKind::Petz(a) | DivergenceKind::Sandwiched(a) if (a - 1.0).abs() < ALPHA_ONE_GUARD => {
            match umegaki_impl(rho, rho_eig, sigma_eig, tol) {
                ExtendedReal::Finite(x) => ExtendedReal::Finite(x / tr_rho),
                inf => inf,
            }
        }
        DivergenceKind::Petz(a) => renyi_from_log_q(petz_log_q(rho, rho_eig, sigma_eig, a, tol), tr_rho, a),
        DivergenceKind::Sandwiched(a) => renyi_from_log_q(sandwiched_log_q(rho, rho_eig, sigma_eig, a, tol), tr_rho, a),
        DivergenceKind::Max => dmax_impl(rho, sigma_eig, tol),
    }
}

fn renyi_from_q(q: f64, tr_rho: f64, alpha: f64) -> ExtendedReal {
    renyi_from_log_q(q.log2(), tr_rho, alpha)
}

fn renyi_from_log_q(log_q: f64, tr_rho: f64, alpha: f64) -> ExtendedReal {
    if !log_q.is_finite() {
        return ExtendedReal::PositiveInfinity;
    }
    let d = (log_q - tr_rho.log2()) / (alpha - 1.0);
    if d.is_nan() {
        return ExtendedReal::PositiveInfinity;
    }
    ExtendedReal::from_f64(d)
}

fn umegaki_impl(
    rho: &HermitianOperator,
    rho_eig: &EigenDecomposition,
    sigma_eig: &EigenDecomposition,
    tol: &Tolerances,
) -> ExtendedReal {
    let rho_w = in_basis(rho, sigma_eig);
    let mask = support_mask(sigma_eig, tol);
    if mass_outside(&rho_w, &mask) > tol.inclusion {
        return ExtendedReal::PositiveInfinity;
    }
    let thr = rho_eig.support_threshold(tol);
    let neg_entropy: f64 = rho_eig
        .eigenvalues()
        .iter()
        .filter(|&&x| x > thr)
        .map(|&x| x * x.log2())
        .sum();
    let cross: f64 = sigma_eig
        .eigenvalues()
        .iter()
        .zip(&mask)
        .enumerate()
        .filter(|(_, (_, &m))| m)
        .map(|(k, (&mu, _))| rho_w[(k, k)].re * mu.log2())
        .sum();
    ExtendedReal::from_f64(neg_entropy - cross)
}

/// `log₂ Σ_k 2^{x_k}` without overflow; `−∞` for an empty sum.
fn log2_sum_exp2(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp2()).sum::<f64>().log2()
}

/// `log₂ Q_α` for `Q_α = tr ρ^α σ^{1−α}` with powers taken on the supports; `+∞` for `α > 1` outside inclusion.
fn petz_log_q(
    rho: &HermitianOperator,
    rho_eig: &EigenDecomposition,
    sigma_eig: &EigenDecomposition,
    alpha: f64,
    tol: &Tolerances,
) -> f64 {
    let smask = support_mask(sigma_eig, tol);
    let rho_w = in_basis(rho, sigma_eig);
    if alpha > 1.0 && mass_outside(&rho_w, &smask) > tol.inclusion {
        return f64::INFINITY;
    }
    if alpha < 1.0 && mass_inside(&rho_w, &smask) <= tol.inclusion {
        return f64::NEG_INFINITY;
    }
    let rmask = support_mask(rho_eig, tol);
    let overlap = rho_eig.eigenvectors().adjoint().matmul(sigma_eig.eigenvectors());
    let mut terms = Vec::new();
    for (j, &lam) in rho_eig.eigenvalues().iter().enumerate() {
        if !rmask[j] {
            continue;
        }
        let a = alpha * lam.log2();
        for (k, &mu) in sigma_eig.eigenvalues().iter().enumerate() {
            let w = overlap[(j, k)].norm_sqr();
            if smask[k] && w > 0.0 {
                terms.push(a + (1.0 - alpha) * mu.log2() + w.log2());
            }
        }
    }
    log2_sum_exp2(&terms)
}

/// `σ^γ ρ σ^γ` restricted to `supp σ`, in σ's eigenbasis.
fn sandwich(rho_w: &ComplexMatrix, sigma_eig: &EigenDecomposition, mask: &[bool], gamma: f64) -> HermitianOperator {
    let idx: Vec<usize> = (0..mask.len()).filter(|&k| mask[k]).collect();
    let pw: Vec<f64> = idx.iter().map(|&k| sigma_eig.eigenvalues()[k].powf(gamma)).collect();
    let n = idx.len();
    let m = ComplexMatrix::from_fn(n, n, |a, b| rho_w[(idx[a], idx[b])] * (pw[a] * pw[b]));
    HermitianOperator::from_hermitian(m)
}

/// `log₂ Q̃_α`, `+∞` for `α > 1` outside inclusion.
fn sandwiched_log_q(
    rho: &HermitianOperator,
    _rho_eig: &EigenDecomposition,
    sigma_eig: &EigenDecomposition,
    alpha: f64,
    tol: &Tolerances,
) -> f64 {
    let mask = support_mask(sigma_eig, tol);
    let rho_w = in_basis(rho, sigma_eig);
    if alpha > 1.0 && mass_outside(&rho_w, &mask) > tol.inclusion {
        return f64::INFINITY;
    }
    if mask.iter().all(|m| !m) {
        return if alpha > 1.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let x = sandwich(&rho_w, sigma_eig, &mask, gamma);
    let eig = match herm_eig_with(&x, tol) {
        Ok(e) => e,
        Err(_) => return f64::NAN,
    };
    let thr = eig.support_threshold(tol);
    let terms: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .filter(|&&v| v > thr)
        .map(|&v| alpha * v.log2())
        .collect();
    log2_sum_exp2(&terms)
}

fn dmax_impl(rho: &HermitianOperator, sigma_eig: &EigenDecomposition, tol: &Tolerances) -> ExtendedReal {
    let mask = support_mask(sigma_eig, tol);
    let rho_w = in_basis(rho, sigma_eig);
    if mass_outside(&rho_w, &mask) > tol.inclusion || mask.iter().all(|m| !m) {
        return ExtendedReal::PositiveInfinity;
    }
    let x = sandwich(&rho_w, sigma_eig, &mask, -0.5);
    match herm_eig_with(&x, tol) {
        Ok(e) if e.max_eigenvalue() > 0.0 => ExtendedReal::from_f64(e.max_eigenvalue().log2()),
        _ => ExtendedReal::PositiveInfinity,
    }
}

/// The spectrum of `I_A ⊗ σ` from that of `σ`.
pub(crate) fn identity_tensor_spectrum(da: usize, sigma: &EigenDecomposition) -> EigenDecomposition {
    let db = sigma.dim();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(da * db);
    for i in 0..da {
        for (k, &mu) in sigma.eigenvalues().iter().enumerate() {
            pairs.push((mu, i, k));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = da * db;
    let w = sigma.eigenvectors();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &(_, i, k)) in pairs.iter().enumerate() {
        for b in 0..db {
            let z = w[(b, k)];
            if z != ZERO {
                vectors[(i * db + b, col)] = z;
            }
        }
    }
    EigenDecomposition::from_parts(pairs.iter().map(|p| p.0).collect(), vectors)
}

/// Direct scalar evaluation of a divergence between two non-negative vectors.
pub fn classical_divergence_oracle(p: &[f64], q: &[f64], kind: DivergenceKind) -> Result<ExtendedReal> {
    kind.validate()?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    if p.iter().chain(q).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(invalid!("distributions must be finite and non-negative"));
    }
    let tr: f64 = p.iter().sum();
    let violates = p.iter().zip(q).any(|(&a, &b)| a > 0.0 && b == 0.0);
    let umegaki = || -> ExtendedReal {
        if violates {
            return ExtendedReal::PositiveInfinity;
        }
        let s: f64 = p
            .iter()
            .zip(q)
            .filter(|(&a, _)| a > 0.0)
            .map(|(&a, &b)| a * (a / b).log2())
            .sum();
        ExtendedReal::from_f64(s)
    };
    let renyi = |a: f64| -> ExtendedReal {
        if (a - 1.0).abs() < ALPHA_ONE_GUARD {
            return match umegaki() {
                ExtendedReal::Finite(x) => ExtendedReal::Finite(x / tr),
                inf => inf,
            };
        }
        if a > 1.0 && violates {
            return ExtendedReal::PositiveInfinity;
        }
        let s: f64 = p
            .iter()
            .zip(q)
            .filter(|(&x, &y)| x > 0.0 && y > 0.0)
            .map(|(&x, &y)| x.powf(a) * y.powf(1.0 - a))
            .sum();
        renyi_from_q(s, tr, a)
    };
    Ok(match kind {
        DivergenceKind::Umegaki => umegaki(),
        DivergenceKind::Petz(a) | DivergenceKind::Sandwiched(a) => renyi(a),
        DivergenceKind::Max => {
            if violates {
                ExtendedReal::PositiveInfinity
            } else {
                let m = p
                    .iter()
                    .zip(q)
                    .filter(|(&a, _)| a > 0.0)
                    .map(|(&a, &b)| (a / b).log2())
                    .fold(f64::NEG_INFINITY, f64::max);
                ExtendedReal::from_f64(m)
            }
        }
    })
}
