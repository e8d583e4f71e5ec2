//! Hermitian operators and their functional calculus.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// A square complex matrix that is Hermitian up to roundoff, stored exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates and symmetrizes `m` with the default tolerances.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = m.hermiticity_defect();
        let allowed = tol.hermiticity * m.max_abs().max(1.0);
        if defect > allowed {
            return Err(Error::NotHermitian {
                defect,
                tolerance: allowed,
            });
        }
        Ok(HermitianOperator {
            matrix: m.hermitian_part(),
        })
    }

    /// Wraps a matrix known to be Hermitian by construction, discarding any anti-Hermitian roundoff.
    pub(crate) fn from_hermitian(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        HermitianOperator {
            matrix: m.hermitian_part(),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::from_diagonal(diag),
        }
    }

    /// `|v⟩⟨v|`.
    pub fn projector_onto(v: &[C64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::outer(v),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, a: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale(a),
        }
    }

    pub fn add(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn kron(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `U H U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_hermitian(self.matrix.conjugate_by(u))
    }

    /// `tr(H K)`, real for Hermitian pairs.
    pub fn inner(&self, other: &HermitianOperator) -> f64 {
        self.matrix.trace_product(&other.matrix).re
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        herm_eig(self)
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Assembles a decomposition from parts already known to be valid (ascending values, unitary vectors).
    pub(crate) fn from_parts(eigenvalues: Vec<f64>, eigenvectors: ComplexMatrix) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        EigenDecomposition {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// The kernel cutoff for this spectrum.
    pub fn support_threshold(&self, tol: &Tolerances) -> f64 {
        tol.support_threshold(self.dim(), self.spectral_radius())
    }

    /// `V diag(values) V†`.
    pub fn reconstruct(&self, values: &[f64]) -> HermitianOperator {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &f) in values.iter().enumerate() {
            if f == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * f;
                if a == ZERO {
                    continue;
                }
                for j in i..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        for i in 0..n {
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                out[(j, i)] = out[(i, j)].conj();
            }
        }
        HermitianOperator { matrix: out }
    }

    /// Projector onto the span of the eigenvectors whose index satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(usize) -> bool) -> HermitianOperator {
        let values: Vec<f64> = (0..self.dim()).map(|k| if keep(k) { 1.0 } else { 0.0 }).collect();
        self.reconstruct(&values)
    }

    /// Index ranges of eigenvalue clusters under single-linkage with the clustering tolerance.
    pub fn clusters(&self, tol: &Tolerances) -> Vec<core::ops::Range<usize>> {
        let gap = tol.cluster_gap(self.spectral_radius());
        let mut out = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            if k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] > gap {
                out.push(start..k);
                start = k;
            }
        }
        out
    }

    /// Returns an error when the spectrum is not positive semi-definite within tolerance.
    pub fn check_psd(&self, tol: &Tolerances) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < -tol.psd * self.spectral_radius().max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }
}

pub fn herm_eig(h: &HermitianOperator) -> Result<EigenDecomposition> {
    herm_eig_with(h, &Tolerances::default())
}

pub fn herm_eig_with(h: &HermitianOperator, tol: &Tolerances) -> Result<EigenDecomposition> {
    let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(&h.matrix, tol.max_sweeps)?;
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Applies `f` to the spectrum; eigenvalues of modulus at most the support threshold map to `kernel_value`.
pub fn mat_func(h: &HermitianOperator, f: impl Fn(f64) -> f64, kernel_value: f64) -> Result<HermitianOperator> {
    mat_func_with(h, f, kernel_value, &Tolerances::default())
}

pub fn mat_func_with(
    h: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    kernel_value: f64,
    tol: &Tolerances,
) -> Result<HermitianOperator> {
    let eig = herm_eig_with(h, tol)?;
    spectral_map(&eig, f, kernel_value, tol)
}

/// [`mat_func`] on an existing decomposition.
pub fn spectral_map(
    eig: &EigenDecomposition,
    f: impl Fn(f64) -> f64,
    kernel_value: f64,
    tol: &Tolerances,
) -> Result<HermitianOperator> {
    let thr = eig.support_threshold(tol);
    let mut values = Vec::with_capacity(eig.dim());
    for &lam in eig.eigenvalues() {
        if lam.abs() <= thr {
            values.push(kernel_value);
        } else {
            let y = f(lam);
            if !y.is_finite() {
                return Err(Error::Domain { eigenvalue: lam });
            }
            values.push(y);
        }
    }
    Ok(eig.reconstruct(&values))
}

/// Power of a positive semi-definite operator on its support; `t = 0` gives the support projector.
pub fn mat_pow(p: &HermitianOperator, t: f64) -> Result<HermitianOperator> {
    mat_pow_with(p, t, &Tolerances::default())
}

pub fn mat_pow_with(p: &HermitianOperator, t: f64, tol: &Tolerances) -> Result<HermitianOperator> {
    let eig = herm_eig_with(p, tol)?;
    eig.check_psd(tol)?;
    psd_power(&eig, t, tol)
}

/// [`mat_pow`] on an existing decomposition, assumed positive semi-definite.
pub fn psd_power(eig: &EigenDecomposition, t: f64, tol: &Tolerances) -> Result<HermitianOperator> {
    let thr = eig.support_threshold(tol);
    let values: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .map(|&lam| {
            if lam <= thr {
                0.0
            } else if t == 0.0 {
                1.0
            } else {
                lam.powf(t)
            }
        })
        .collect();
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain { eigenvalue: bad });
    }
    Ok(eig.reconstruct(&values))
}

/// Base-2 logarithm on the support, zero on the kernel.
pub fn log2m(p: &HermitianOperator) -> Result<HermitianOperator> {
    let tol = Tolerances::default();
    let eig = herm_eig_with(p, &tol)?;
    eig.check_psd(&tol)?;
    spectral_map(&eig, f64::log2, 0.0, &tol)
}

/// `tr H_+`, the sum of the positive eigenvalues.
pub fn positive_part_trace(h: &HermitianOperator) -> Result<f64> {
    let eig = herm_eig(h)?;
    Ok(eig.eigenvalues().iter().filter(|&&x| x > 0.0).sum())
}

/// The projector `{A ≥ B}` onto the non-negative eigenspace of `A − B`.
pub fn proj_geq(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let tol = Tolerances::default();
    let eig = herm_eig_with(&a.sub(b), &tol)?;
    let thr = eig.support_threshold(&tol);
    let vals = eig.eigenvalues().to_vec();
    Ok(eig.projector(|k| vals[k] >= -thr))
}

/// Number of distinct eigenvalues after clustering nearly equal ones.
pub fn distinct_eigenvalue_count(h: &HermitianOperator) -> Result<usize> {
    distinct_eigenvalue_count_with(h, &Tolerances::default())
}

pub fn distinct_eigenvalue_count_with(h: &HermitianOperator, tol: &Tolerances) -> Result<usize> {
    Ok(herm_eig_with(h, tol)?.clusters(tol).len().max(1))
}

/// Spectral projectors of `h` for each eigenvalue cluster, paired with the cluster's mean eigenvalue.
pub fn spectral_projectors(h: &HermitianOperator, tol: &Tolerances) -> Result<Vec<(f64, HermitianOperator)>> {
    let eig = herm_eig_with(h, tol)?;
    Ok(eig
        .clusters(tol)
        .into_iter()
        .map(|r| {
            let mean = eig.eigenvalues()[r.clone()].iter().sum::<f64>() / r.len() as f64;
            (mean, eig.projector(|k| r.contains(&k)))
        })
        .collect())
}
