//! Quantum channels in normalized Choi representation.

use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{invalid, precondition, Error, Result};
use crate::haar::random_isometry;
use crate::hermitian::{herm_eig_with, spectral_projectors, HermitianOperator};
use crate::matrix::{partial_trace, permute_subsystems, ComplexMatrix, ONE, ZERO};
use crate::state::{MultipartiteState, Subsystem};
use crate::tolerance::Tolerances;
#[allow(unused_imports)]
use crate::Float;

/// Deviation allowed in `tr_C ω = I/din` when classifying a channel as trace preserving.
const TP_TOLERANCE: f64 = 1e-9;

/// A completely positive map `A → C` stored through its normalized Choi state `ω_{A'C} = T(Φ_{AA'})`.
///
/// The input copy `A'` is the first tensor factor of `ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    din: usize,
    dout: usize,
    choi: HermitianOperator,
    trace_preserving: bool,
}

impl QuantumChannel {
    /// Validates a normalized Choi state; `tr_C ω` must equal `I/din` (trace preserving) or be below it.
    pub fn from_choi(choi: HermitianOperator, din: usize, dout: usize) -> Result<Self> {
        if din * dout != choi.dim() || din == 0 || dout == 0 {
            return Err(Error::DimensionMismatch {
                expected: choi.dim(),
                found: din * dout,
            });
        }
        let tol = Tolerances::default();
        herm_eig_with(&choi, &tol)?.check_psd(&tol)?;
        let marginal = HermitianOperator::from_hermitian(partial_trace(choi.matrix(), &[din, dout], &[0])?);
        let target = HermitianOperator::identity(din).scale(1.0 / din as f64);
        let gap = target.sub(&marginal);
        let trace_preserving = gap.matrix().max_abs() <= TP_TOLERANCE;
        if !trace_preserving {
            let min = herm_eig_with(&gap, &tol)?.min_eigenvalue();
            if min < -TP_TOLERANCE {
                return Err(precondition!(
                    "Choi marginal exceeds I/din by {:e}; the map increases trace",
                    -min
                ));
            }
        }
        Ok(QuantumChannel {
            din,
            dout,
            choi,
            trace_preserving,
        })
    }

    /// The channel `X ↦ Σ_k K_k X K_k†`; every `K_k` is `dout × din`.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| invalid!("at least one Kraus operator is required"))?;
        let (dout, din) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != dout || k.cols() != din) {
            return Err(invalid!("Kraus operators must share one shape"));
        }
        let mut m = ComplexMatrix::zeros(din * dout, din * dout);
        let scale = 1.0 / din as f64;
        for k in kraus {
            for i in 0..din {
                for j in 0..din {
                    for c in 0..dout {
                        let a = k[(c, i)] * scale;
                        if a == ZERO {
                            continue;
                        }
                        for cp in 0..dout {
                            m[(i * dout + c, j * dout + cp)] += a * k[(cp, j)].conj();
                        }
                    }
                }
            }
        }
        Self::from_choi(HermitianOperator::from_hermitian(m), din, dout)
    }

    /// Kraus operators `K_k[c, i] = √(λ_k din) v_k[i dout + c]` from the Choi eigendecomposition.
    pub fn kraus(&self) -> Result<Vec<ComplexMatrix>> {
        let tol = Tolerances::default();
        let eig = herm_eig_with(&self.choi, &tol)?;
        let thr = eig.support_threshold(&tol);
        let mut out = Vec::new();
        for (k, &lam) in eig.eigenvalues().iter().enumerate() {
            if lam <= thr {
                continue;
            }
            let amp = (lam * self.din as f64).sqrt();
            let v = eig.eigenvectors();
            out.push(ComplexMatrix::from_fn(self.dout, self.din, |c, i| {
                v[(i * self.dout + c, k)] * amp
            }));
        }
        Ok(out)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(&[ComplexMatrix::identity(d)]).expect("identity is a channel")
    }

    /// `tr_{A2}` on `A = A1 ⊗ A2`.
    pub fn partial_trace(d_a1: usize, d_a2: usize) -> Self {
        let kraus: Vec<ComplexMatrix> = (0..d_a2)
            .map(|j| ComplexMatrix::from_fn(d_a1, d_a1 * d_a2, |c, i| if i == c * d_a2 + j { ONE } else { ZERO }))
            .collect();
        Self::from_kraus(&kraus).expect("partial trace is a channel")
    }

    /// The trace `A → C^1`.
    pub fn full_trace(d: usize) -> Self {
        Self::partial_trace(1, d)
    }

    /// The pinching `X ↦ Σ_i P_i X P_i` over the clustered spectral projectors of `h`.
    pub fn pinching(h: &HermitianOperator) -> Result<Self> {
        let projs = spectral_projectors(h, &Tolerances::default())?;
        let kraus: Vec<ComplexMatrix> = projs.into_iter().map(|(_, p)| p.into_matrix()).collect();
        Self::from_kraus(&kraus)
    }

    /// `N(ρ)_{xy} = ρ_{xy} G_{yx}` for a Gram matrix `G_{xy} = ⟨ψ_x|ψ_y⟩`.
    pub fn generalized_dephasing(overlaps: &ComplexMatrix) -> Result<Self> {
        let g = HermitianOperator::new(overlaps.clone()).map_err(|e| precondition!("overlaps: {e}"))?;
        let tol = Tolerances::default();
        if herm_eig_with(&g, &tol)?.check_psd(&tol).is_err() {
            return Err(precondition!("overlap matrix is not positive semi-definite"));
        }
        let d = g.dim();
        if (0..d).any(|x| (g.matrix()[(x, x)] - ONE).norm() > 1e-10) {
            return Err(precondition!("overlap matrix must have unit diagonal"));
        }
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for x in 0..d {
            for y in 0..d {
                m[(x * d + x, y * d + y)] = g.matrix()[(y, x)] / d as f64;
            }
        }
        Self::from_choi(HermitianOperator::from_hermitian(m), d, d)
    }

    /// A random channel from a Haar isometry into `C^dout ⊗ C^env` followed by tracing out the environment.
    pub fn random(din: usize, dout: usize, env: usize, rng: &mut impl RngCore) -> Result<Self> {
        let v = random_isometry(dout * env, din, rng)?;
        let kraus: Vec<ComplexMatrix> = (0..env)
            .map(|e| ComplexMatrix::from_fn(dout, din, |c, i| v[(c * env + e, i)]))
            .collect();
        Self::from_kraus(&kraus)
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn choi(&self) -> &HermitianOperator {
        &self.choi
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `ω_C = T(I/din)`.
    pub fn output_of_maximally_mixed(&self) -> HermitianOperator {
        HermitianOperator::from_hermitian(
            partial_trace(self.choi.matrix(), &[self.din, self.dout], &[1]).expect("dimensions checked"),
        )
    }

    /// Applies the map to the first factor of an operator on `A ⊗ E` with `dim E = de`; output is on `C ⊗ E`.
    pub fn apply_operator(&self, x: &ComplexMatrix, de: usize) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != self.din * de {
            return Err(Error::DimensionMismatch {
                expected: self.din * de,
                found: x.rows(),
            });
        }
        let (din, dout) = (self.din, self.dout);
        let w = self.choi.matrix();
        let scale = din as f64;
        let mut out = ComplexMatrix::zeros(dout * de, dout * de);
        for i in 0..din {
            for j in 0..din {
                for c in 0..dout {
                    for cp in 0..dout {
                        let omega = w[(i * dout + c, j * dout + cp)] * scale;
                        if omega == ZERO {
                            continue;
                        }
                        for e in 0..de {
                            for ep in 0..de {
                                out[(c * de + e, cp * de + ep)] += omega * x[(i * de + e, j * de + ep)];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the channel to subsystem `on`; the output keeps that label and position with dimension `dout`.
    pub fn apply(&self, state: &MultipartiteState, on: &str) -> Result<MultipartiteState> {
        let idx = state.index_of(on)?;
        let subs = state.subsystems();
        if subs[idx].dim != self.din {
            return Err(Error::DimensionMismatch {
                expected: self.din,
                found: subs[idx].dim,
            });
        }
        let dims = state.dims();
        let n = dims.len();
        let mut order: Vec<usize> = alloc::vec![idx];
        order.extend((0..n).filter(|&k| k != idx));
        let front = permute_subsystems(state.matrix(), &dims, &order)?;
        let de = state.dim() / self.din;
        let out = self.apply_operator(&front, de)?;
        let mut out_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
        out_dims[0] = self.dout;
        let mut inverse = alloc::vec![0usize; n];
        for (pos, &k) in order.iter().enumerate() {
            inverse[k] = pos;
        }
        let back = permute_subsystems(&out, &out_dims, &inverse)?;
        let mut new_subs: Vec<Subsystem> = subs.to_vec();
        new_subs[idx].dim = self.dout;
        Ok(MultipartiteState::trusted(
            HermitianOperator::from_hermitian(back),
            new_subs,
            state.is_subnormalized() || !self.trace_preserving,
        ))
    }

    /// `T ∘ S`, applying `first` and then `self`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<QuantumChannel> {
        if first.dout != self.din {
            return Err(Error::DimensionMismatch {
                expected: self.din,
                found: first.dout,
            });
        }
        let outer = self.kraus()?;
        let inner = first.kraus()?;
        let mut kraus = Vec::with_capacity(outer.len() * inner.len());
        for a in &outer {
            for b in &inner {
                kraus.push(a.matmul(b));
            }
        }
        Self::from_kraus(&kraus)
    }
}

/// `Σ_k (K_k ⊗ I_E) X (K_k ⊗ I_E)†`.
pub fn apply_kraus(kraus: &[ComplexMatrix], x: &ComplexMatrix, de: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(de);
    let dout = kraus[0].rows();
    let mut out = ComplexMatrix::zeros(dout * de, dout * de);
    for k in kraus {
        let big = k.kron(&id);
        out += &big.matmul(x).matmul(&big.adjoint());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use crate::rng::SeededRng;
    use crate::state::{max_entangled, random_density, random_state, subsystems};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn identity_leaves_states_unchanged() {
        let mut rng = SeededRng::new(20, 0);
        let rho = random_state(subsystems(&[("A", 2), ("E", 3)]), 4, &mut rng).unwrap();
        let out = QuantumChannel::identity(2).apply(&rho, "A").unwrap();
        assert!(close(out.matrix(), rho.matrix(), 1e-15));
        let out = QuantumChannel::identity(3).apply(&rho, "E").unwrap();
        assert!(close(out.matrix(), rho.matrix(), 1e-15));
    }

    #[test]
    fn partial_trace_channel_gives_marginal() {
        let mut rng = SeededRng::new(21, 0);
        let a = random_density(2, 2, &mut rng).unwrap();
        let b = random_density(3, 3, &mut rng).unwrap();
        let ab = a.matrix().kron(b.matrix());
        let ch = QuantumChannel::partial_trace(2, 3);
        let out = ch.apply_operator(&ab, 1).unwrap();
        assert!(close(&out, a.matrix(), 1e-15));
        assert!(ch.is_trace_preserving());
        let t = QuantumChannel::full_trace(4);
        assert_eq!((t.din(), t.dout()), (4, 1));
    }

    #[test]
    fn choi_application_matches_kraus() {
        let mut rng = SeededRng::new(22, 0);
        for (din, dout, env, de) in [(2, 2, 2, 2), (3, 2, 3, 2), (2, 3, 4, 1)] {
            let ch = QuantumChannel::random(din, dout, env, &mut rng).unwrap();
            assert!(ch.is_trace_preserving());
            let rho = random_density(din * de, din * de, &mut rng).unwrap();
            let direct = ch.apply_operator(rho.matrix(), de).unwrap();
            let kraus = ch.kraus().unwrap();
            assert!(close(&direct, &apply_kraus(&kraus, rho.matrix(), de), 1e-12));
            assert!((direct.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_on_middle_subsystem() {
        let mut rng = SeededRng::new(23, 0);
        let rho = random_state(subsystems(&[("X", 2), ("A", 3), ("Y", 2)]), 5, &mut rng).unwrap();
        let ch = QuantumChannel::random(3, 2, 2, &mut rng).unwrap();
        let out = ch.apply(&rho, "A").unwrap();
        assert_eq!(out.dims(), [2, 2, 2]);
        let front = rho.reorder(&["A", "X", "Y"]).unwrap();
        let expect = ch.apply_operator(front.matrix(), 4).unwrap();
        let got = out.reorder(&["A", "X", "Y"]).unwrap();
        assert!(close(got.matrix(), &expect, 1e-13));
        assert!(matches!(ch.apply(&rho, "X"), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(ch.apply(&rho, "Q"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn identity_choi_is_phi() {
        let ch = QuantumChannel::identity(3);
        assert!(close(ch.choi().matrix(), max_entangled(3).matrix(), 1e-15));
    }

    #[test]
    fn pinching_examples() {
        let h = HermitianOperator::from_diagonal(&[0.1, 0.2, 0.3]);
        let p = QuantumChannel::pinching(&h).unwrap();
        let x = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let y = p.apply_operator(&x, 1).unwrap();
        assert!(close(
            &y,
            &ComplexMatrix::from_fn(3, 3, |i, j| if i == j { x[(i, i)] } else { ZERO }),
            1e-14
        ));
        let id = QuantumChannel::pinching(&HermitianOperator::identity(3)).unwrap();
        assert!(close(
            id.choi().matrix(),
            QuantumChannel::identity(3).choi().matrix(),
            1e-15
        ));
        let twice = p.apply_operator(&y, 1).unwrap();
        assert!(close(&twice, &y, 1e-14));
    }

    #[test]
    fn dephasing_examples() {
        let ones = ComplexMatrix::from_fn(2, 2, |_, _| ONE);
        let ch = QuantumChannel::generalized_dephasing(&ones).unwrap();
        assert!(close(
            ch.choi().matrix(),
            QuantumChannel::identity(2).choi().matrix(),
            1e-15
        ));
        let full = QuantumChannel::generalized_dephasing(&ComplexMatrix::identity(2)).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(close(
            &full.apply_operator(&x, 1).unwrap(),
            &ComplexMatrix::from_diagonal(&[0.5, 0.5]),
            1e-15
        ));
        let half = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 1.0]]).unwrap();
        let ch = QuantumChannel::generalized_dephasing(&half).unwrap();
        let out = ch.apply(&max_entangled(2), "B").unwrap();
        let vals = out.eig().unwrap().eigenvalues().to_vec();
        let expect = [0.0, 0.0, 0.25, 0.75];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
        let not_gram = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(QuantumChannel::generalized_dephasing(&not_gram).is_err());
    }

    #[test]
    fn partial_isometry_is_trace_nonincreasing() {
        let p = ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]);
        let ch = QuantumChannel::from_kraus(&[p]).unwrap();
        assert!(!ch.is_trace_preserving());
        let grow = ComplexMatrix::identity(2).scale(2.0);
        assert!(QuantumChannel::from_kraus(&[grow]).is_err());
    }

    #[test]
    fn composition() {
        let mut rng = SeededRng::new(24, 0);
        let a = QuantumChannel::random(2, 3, 2, &mut rng).unwrap();
        let b = QuantumChannel::random(3, 2, 2, &mut rng).unwrap();
        let ba = b.compose(&a).unwrap();
        let rho = random_density(2, 2, &mut rng).unwrap();
        let step = b
            .apply_operator(&a.apply_operator(rho.matrix(), 1).unwrap(), 1)
            .unwrap();
        assert!(close(&ba.apply_operator(rho.matrix(), 1).unwrap(), &step, 1e-13));
    }
}
