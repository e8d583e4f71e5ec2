/// Numerical tolerances shared by the spectral routines.
///
/// All thresholds are relative to `max(1, scale)` where `scale` is the
/// relevant matrix or spectrum magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted `‖M − M†‖_max` before construction fails; smaller defects are symmetrized away.
    pub hermiticity: f64,
    /// Multiplier on `dim · ε_machine · max(|λ_max|, 1)`, the kernel cutoff for eigenvalues.
    pub support_scale: f64,
    /// Eigenvalues closer than this (relative) are treated as equal.
    pub cluster: f64,
    /// Most negative eigenvalue accepted for a positive semi-definite operator.
    pub psd: f64,
    /// Largest `‖(I − Π_σ) ρ (I − Π_σ)‖` for which `supp ρ ⊆ supp σ` is accepted.
    pub inclusion: f64,
    /// Allowed deviation of a trace from its nominal value.
    pub trace: f64,
    /// Sweep limit of the Jacobi eigensolver.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-8,
            support_scale: 1.0,
            cluster: 1e-8,
            psd: 1e-9,
            inclusion: 1e-10,
            trace: 1e-10,
            max_sweeps: 64,
        }
    }
}

impl Tolerances {
    /// Eigenvalues at or below this value count as kernel.
    pub fn support_threshold(&self, dim: usize, lambda_max: f64) -> f64 {
        self.support_scale * (dim.max(1) as f64) * f64::EPSILON * lambda_max.abs().max(1.0)
    }

    pub fn cluster_gap(&self, lambda_max: f64) -> f64 {
        self.cluster * lambda_max.abs().max(1.0)
    }
}
