//! Distances and fidelities between states.

use crate::error::{precondition, Result};
use crate::hermitian::{herm_eig_with, psd_power, HermitianOperator};
use crate::linalg;
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// Schatten 1-norm from the singular values; works for non-Hermitian input.
pub fn trace_norm(x: &ComplexMatrix) -> Result<f64> {
    let sv = linalg::singular_values(x, Tolerances::default().max_sweeps)?;
    Ok(sv.iter().sum())
}

fn check_state(rho: &HermitianOperator, name: &str, tol: &Tolerances) -> Result<()> {
    let eig = herm_eig_with(rho, tol)?;
    if eig.check_psd(tol).is_err() {
        return Err(precondition!("{name} is not positive semi-definite"));
    }
    let tr = rho.trace();
    if tr > 1.0 + tol.trace || tr <= 0.0 {
        return Err(precondition!("{name} has trace {tr}, not a (sub-)normalized state"));
    }
    Ok(())
}

fn check_pair(rho: &HermitianOperator, sigma: &HermitianOperator, tol: &Tolerances) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    check_state(rho, "first argument", tol)?;
    check_state(sigma, "second argument", tol)
}

/// `F(ρ, σ) = ‖√ρ √σ‖₁`.
pub fn fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    let tol = Tolerances::default();
    check_pair(rho, sigma, &tol)?;
    let sr = psd_power(&herm_eig_with(rho, &tol)?, 0.5, &tol)?;
    let ss = psd_power(&herm_eig_with(sigma, &tol)?, 0.5, &tol)?;
    let f = trace_norm(&sr.matrix().matmul(ss.matrix()))?;
    Ok(f.clamp(0.0, 1.0))
}

/// `P(ρ, σ) = √(1 − F²)`.
pub fn purified_distance(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    let tol = Tolerances::default();
    check_pair(rho, sigma, &tol)?;
    let eig = herm_eig_with(&rho.sub(sigma), &tol)?;
    Ok(0.5 * eig.eigenvalues().iter().map(|x| x.abs()).sum::<f64>())
}
