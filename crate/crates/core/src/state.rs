//! Labeled multipartite density operators and standard state families.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{invalid, precondition, Error, Result};
use crate::haar::ginibre;
use crate::hermitian::{herm_eig_with, EigenDecomposition, HermitianOperator};
use crate::matrix::{partial_trace, permute_subsystems, ComplexMatrix, C64, ZERO};
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// A named tensor factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

impl Subsystem {
    pub fn new(label: &str, dim: usize) -> Self {
        Subsystem {
            label: label.to_string(),
            dim,
        }
    }
}

/// Builds a subsystem list from `(label, dim)` pairs.
pub fn subsystems(spec: &[(&str, usize)]) -> Vec<Subsystem> {
    spec.iter().map(|&(l, d)| Subsystem::new(l, d)).collect()
}

/// A density operator on an ordered product of labeled subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipartiteState {
    density: HermitianOperator,
    subsystems: Vec<Subsystem>,
    subnormalized: bool,
}

fn check_layout(dim: usize, subsystems: &[Subsystem]) -> Result<()> {
    for (i, s) in subsystems.iter().enumerate() {
        if s.dim == 0 {
            return Err(invalid!("subsystem `{}` has dimension 0", s.label));
        }
        if subsystems[..i].iter().any(|t| t.label == s.label) {
            return Err(Error::DuplicateLabel(s.label.clone()));
        }
    }
    let total: usize = subsystems.iter().map(|s| s.dim).product();
    if subsystems.is_empty() || total != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: total,
        });
    }
    Ok(())
}

impl MultipartiteState {
    /// A normalized state; fails unless the operator is positive semi-definite with unit trace.
    pub fn new(density: HermitianOperator, subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::validated(density, subsystems, false, &Tolerances::default())
    }

    /// A state with trace at most one.
    pub fn new_subnormalized(density: HermitianOperator, subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::validated(density, subsystems, true, &Tolerances::default())
    }

    pub fn from_matrix(matrix: ComplexMatrix, subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::new(HermitianOperator::new(matrix)?, subsystems)
    }

    pub fn validated(
        density: HermitianOperator,
        subsystems: Vec<Subsystem>,
        subnormalized: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_layout(density.dim(), &subsystems)?;
        herm_eig_with(&density, tol)?.check_psd(tol)?;
        let trace = density.trace();
        let ok = if subnormalized {
            trace <= 1.0 + tol.trace && trace > 0.0
        } else {
            (trace - 1.0).abs() <= tol.trace
        };
        if !ok {
            return Err(Error::NotNormalized { trace });
        }
        Ok(MultipartiteState {
            density,
            subsystems,
            subnormalized,
        })
    }

    /// Skips validation; for results of operations that preserve the state contract.
    pub(crate) fn trusted(density: HermitianOperator, subsystems: Vec<Subsystem>, subnormalized: bool) -> Self {
        debug_assert_eq!(subsystems.iter().map(|s| s.dim).product::<usize>(), density.dim());
        MultipartiteState {
            density,
            subsystems,
            subnormalized,
        }
    }

    pub fn density(&self) -> &HermitianOperator {
        &self.density
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.density.matrix()
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(|s| s.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn trace(&self) -> f64 {
        self.density.trace()
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.density.inner(&self.density)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.subsystems[self.index_of(label)?].dim)
    }

    fn indices(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let idx = labels.iter().map(|l| self.index_of(l)).collect::<Result<Vec<_>>>()?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(idx)
    }

    /// The reduced state on `labels`, with subsystems in the order given.
    pub fn marginal(&self, labels: &[&str]) -> Result<MultipartiteState> {
        let idx = self.indices(labels)?;
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        let reduced = if sorted.len() == self.subsystems.len() {
            self.density.matrix().clone()
        } else {
            partial_trace(self.density.matrix(), &self.dims(), &sorted)?
        };
        let sorted_dims: Vec<usize> = sorted.iter().map(|&i| self.subsystems[i].dim).collect();
        let order: Vec<usize> = idx
            .iter()
            .map(|i| sorted.iter().position(|s| s == i).unwrap())
            .collect();
        let permuted = permute_subsystems(&reduced, &sorted_dims, &order)?;
        Ok(MultipartiteState::trusted(
            HermitianOperator::from_hermitian(permuted),
            idx.iter().map(|&i| self.subsystems[i].clone()).collect(),
            self.subnormalized,
        ))
    }

    /// The same state with its subsystems permuted into the order of `labels` (all labels required).
    pub fn reorder(&self, labels: &[&str]) -> Result<MultipartiteState> {
        if labels.len() != self.subsystems.len() {
            return Err(invalid!("reorder needs all {} labels", self.subsystems.len()));
        }
        self.marginal(labels)
    }

    /// `ρ ⊗ σ`; labels must be disjoint.
    pub fn tensor(&self, other: &MultipartiteState) -> Result<MultipartiteState> {
        let mut subs = self.subsystems.clone();
        subs.extend(other.subsystems.iter().cloned());
        check_layout(self.dim() * other.dim(), &subs)?;
        Ok(MultipartiteState::trusted(
            self.density.kron(&other.density),
            subs,
            self.subnormalized || other.subnormalized,
        ))
    }

    /// Replaces the subsystem layout; the total dimension must match.
    pub fn with_subsystems(&self, subsystems: Vec<Subsystem>) -> Result<MultipartiteState> {
        check_layout(self.dim(), &subsystems)?;
        Ok(MultipartiteState::trusted(
            self.density.clone(),
            subsystems,
            self.subnormalized,
        ))
    }

    /// Renames subsystems in order, keeping dimensions.
    pub fn relabel(&self, labels: &[&str]) -> Result<MultipartiteState> {
        if labels.len() != self.subsystems.len() {
            return Err(invalid!("relabel needs {} labels", self.subsystems.len()));
        }
        let subs = labels
            .iter()
            .zip(&self.subsystems)
            .map(|(l, s)| Subsystem::new(l, s.dim))
            .collect();
        self.with_subsystems(subs)
    }

    /// Groups the listed subsystems into a bipartition `(A, B)`, tracing out everything else.
    pub fn bipartition(&self, a: &[&str], b: &[&str]) -> Result<BipartiteState> {
        let mut all: Vec<&str> = a.to_vec();
        all.extend_from_slice(b);
        let m = self.marginal(&all)?;
        let da: usize = m.subsystems[..a.len()].iter().map(|s| s.dim).product();
        let db: usize = m.subsystems[a.len()..].iter().map(|s| s.dim).product();
        BipartiteState::from_parts(m.density, da, db)
    }

    /// A pure state on these subsystems plus a purifying system `label` of dimension `rank(ρ)`.
    pub fn purify(&self, label: &str) -> Result<MultipartiteState> {
        if self.subsystems.iter().any(|s| s.label == label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        let tol = Tolerances::default();
        let eig = herm_eig_with(&self.density, &tol)?;
        let thr = eig.support_threshold(&tol);
        let support: Vec<usize> = (0..eig.dim()).filter(|&k| eig.eigenvalues()[k] > thr).collect();
        let r = support.len().max(1);
        let n = self.dim();
        let mut psi = vec![ZERO; n * r];
        for (j, &k) in support.iter().enumerate() {
            let amp = eig.eigenvalues()[k].sqrt();
            for i in 0..n {
                psi[i * r + j] = eig.eigenvectors()[(i, k)] * amp;
            }
        }
        let mut subs = self.subsystems.clone();
        subs.push(Subsystem::new(label, r));
        Ok(MultipartiteState::trusted(
            HermitianOperator::projector_onto(&psi),
            subs,
            self.subnormalized,
        ))
    }

    /// Fails unless `tr ρ² = (tr ρ)²` within `tolerance`.
    pub fn check_pure(&self, tolerance: f64) -> Result<()> {
        let purity = self.purity();
        let tr = self.trace();
        if (purity - tr * tr).abs() > tolerance {
            return Err(Error::NotPure { purity });
        }
        Ok(())
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        self.density.eig()
    }
}

/// A state on `A ⊗ B` with plain dimensions, the argument type of the conditional entropies.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    rho: HermitianOperator,
    da: usize,
    db: usize,
}

impl BipartiteState {
    pub fn from_parts(rho: HermitianOperator, da: usize, db: usize) -> Result<Self> {
        if da * db != rho.dim() || da == 0 || db == 0 {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: da * db,
            });
        }
        Ok(BipartiteState { rho, da, db })
    }

    pub fn rho(&self) -> &HermitianOperator {
        &self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.da
    }

    pub fn dim_b(&self) -> usize {
        self.db
    }

    pub fn marginal_a(&self) -> HermitianOperator {
        HermitianOperator::from_hermitian(
            partial_trace(self.rho.matrix(), &[self.da, self.db], &[0]).expect("dimensions checked"),
        )
    }

    pub fn marginal_b(&self) -> HermitianOperator {
        HermitianOperator::from_hermitian(
            partial_trace(self.rho.matrix(), &[self.da, self.db], &[1]).expect("dimensions checked"),
        )
    }

    /// `I_A ⊗ σ_B`.
    pub fn identity_a_tensor(&self, sigma_b: &HermitianOperator) -> HermitianOperator {
        HermitianOperator::identity(self.da).kron(sigma_b)
    }

    /// The state with `A` and `B` exchanged.
    pub fn swapped(&self) -> BipartiteState {
        let m = permute_subsystems(self.rho.matrix(), &[self.da, self.db], &[1, 0]).expect("dimensions checked");
        BipartiteState {
            rho: HermitianOperator::from_hermitian(m),
            da: self.db,
            db: self.da,
        }
    }

    /// `ρ ⊗ σ` regrouped as `(A A') ⊗ (B B')`.
    pub fn tensor(&self, other: &BipartiteState) -> BipartiteState {
        let joint = self.rho.kron(&other.rho);
        let m = permute_subsystems(joint.matrix(), &[self.da, self.db, other.da, other.db], &[0, 2, 1, 3])
            .expect("dimensions checked");
        BipartiteState {
            rho: HermitianOperator::from_hermitian(m),
            da: self.da * other.da,
            db: self.db * other.db,
        }
    }

    /// `ρ^{⊗m}` grouped as `A^m ⊗ B^m`.
    pub fn tensor_power(&self, m: usize) -> BipartiteState {
        let mut out = self.clone();
        for _ in 1..m {
            out = out.tensor(self);
        }
        out
    }

    pub fn to_multipartite(&self, a: &str, b: &str) -> Result<MultipartiteState> {
        MultipartiteState::validated(
            self.rho.clone(),
            subsystems(&[(a, self.da), (b, self.db)]),
            true,
            &Tolerances::default(),
        )
    }
}

/// `Φ = (1/d) Σ_{ij} |ii⟩⟨jj|` on subsystems `A`, `B`.
pub fn max_entangled(d: usize) -> MultipartiteState {
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    MultipartiteState::trusted(
        HermitianOperator::projector_onto(&v),
        subsystems(&[("A", d), ("B", d)]),
        false,
    )
}

/// `I/d` on subsystem `A`.
pub fn max_mixed(d: usize) -> MultipartiteState {
    MultipartiteState::trusted(
        HermitianOperator::identity(d).scale(1.0 / d as f64),
        subsystems(&[("A", d)]),
        false,
    )
}

/// `Σ_{xy} c_{xy} |xx⟩⟨yy|` on subsystems `A`, `B`; `coeffs` must be a density matrix.
pub fn maximally_correlated(coeffs: &ComplexMatrix) -> Result<MultipartiteState> {
    let c = HermitianOperator::new(coeffs.clone()).map_err(|e| precondition!("coefficients: {e}"))?;
    let tol = Tolerances::default();
    if herm_eig_with(&c, &tol)?.check_psd(&tol).is_err() || (c.trace() - 1.0).abs() > tol.trace {
        return Err(precondition!("coefficients must form a density matrix"));
    }
    let d = c.dim();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for x in 0..d {
        for y in 0..d {
            m[(x * d + x, y * d + y)] = c.matrix()[(x, y)];
        }
    }
    Ok(MultipartiteState::trusted(
        HermitianOperator::from_hermitian(m),
        subsystems(&[("A", d), ("B", d)]),
        false,
    ))
}

/// A Ginibre-induced random density matrix of the given rank on subsystem `A`.
pub fn random_density(dim: usize, rank: usize, rng: &mut impl RngCore) -> Result<MultipartiteState> {
    if rank == 0 || rank > dim {
        return Err(invalid!("rank {rank} must lie in 1..={dim}"));
    }
    let g = ginibre(dim, rank, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    Ok(MultipartiteState::trusted(
        HermitianOperator::from_hermitian(w.scale(1.0 / tr)),
        subsystems(&[("A", dim)]),
        false,
    ))
}

/// A random density matrix on the given subsystems.
pub fn random_state(subs: Vec<Subsystem>, rank: usize, rng: &mut impl RngCore) -> Result<MultipartiteState> {
    let dim = subs.iter().map(|s| s.dim).product();
    random_density(dim, rank, rng)?.with_subsystems(subs)
}

/// A uniformly random pure state on the given subsystems.
pub fn random_pure(subs: Vec<Subsystem>, rng: &mut impl RngCore) -> Result<MultipartiteState> {
    random_state(subs, 1, rng)
}

/// The normalized vector of a rank-one state, up to a global phase.
pub fn state_vector(rho: &HermitianOperator) -> Result<Vec<C64>> {
    let eig = rho.eig()?;
    let k = eig.dim() - 1;
    let amp = eig.max_eigenvalue().max(0.0).sqrt();
    Ok((0..eig.dim()).map(|i| eig.eigenvectors()[(i, k)] * amp).collect())
}
