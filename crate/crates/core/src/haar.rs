//! Haar-random unitaries and isometries, Heisenberg–Weyl operators and the
//! exact second moment of the Haar twirl.

use alloc::vec::Vec;

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::linalg::thin_qr;
use crate::matrix::{permute_subsystems, ComplexMatrix, C64, ONE};
#[allow(unused_imports)]
use crate::Float;

/// A matrix of i.i.d. standard complex Gaussians (unit variance per entry).
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl RngCore) -> ComplexMatrix {
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * scale, im * scale)
    })
}

/// A Haar-distributed `d × d` unitary (QR of a Ginibre matrix with positive real `R` diagonal).
pub fn haar_unitary(d: usize, rng: &mut impl RngCore) -> ComplexMatrix {
    thin_qr(&ginibre(d, d, rng)).0
}

/// A uniformly random isometry `C^din → C^dout` as a `dout × din` matrix.
pub fn random_isometry(dout: usize, din: usize, rng: &mut impl RngCore) -> Result<ComplexMatrix> {
    if din > dout {
        return Err(invalid!("an isometry needs din ≤ dout, got {din} > {dout}"));
    }
    Ok(thin_qr(&ginibre(dout, din, rng)).0)
}

/// The `d²` operators `X^a Z^b` in `a`-major order.
pub fn heisenberg_weyl(d: usize) -> Vec<ComplexMatrix> {
    let omega = C64::from_polar(1.0, 2.0 * core::f64::consts::PI / d as f64);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut m = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                m[((j + a) % d, j)] = omega.powu((b * j % d) as u32);
            }
            out.push(m);
        }
    }
    out
}

/// The swap `F = Σ |i⟩⟨j| ⊗ |j⟩⟨i|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = ONE;
        }
    }
    f
}

/// `E_U [(U Φ U†)_{AA'} ⊗ (U Φ U†)_{ÃÃ'}]` for normalized `Φ`, on the ordering `A A' Ã Ã'`.
///
/// Equals `(I − (F_{AÃ} ⊗ I + I ⊗ F_{A'Ã'})/d + F_{AÃ} ⊗ F_{A'Ã'}) / (d²(d² − 1))`.
pub fn exact_second_moment(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(invalid!("the second-moment formula needs d ≥ 2"));
    }
    let df = d as f64;
    let f = swap_operator(d);
    let id = ComplexMatrix::identity(d * d);
    // Built on the ordering A Ã A' Ã', then permuted.
    let mut m = id.kron(&id);
    m += &f.kron(&id).scale(-1.0 / df);
    m += &id.kron(&f).scale(-1.0 / df);
    m += &f.kron(&f);
    let m = m.scale(1.0 / (df * df * (df * df - 1.0)));
    permute_subsystems(&m, &[d, d, d, d], &[0, 2, 1, 3])
}

/// `(1/d²) Σ_k W_k M W_k†` over the Heisenberg–Weyl operators.
pub fn heisenberg_weyl_twirl(m: &ComplexMatrix) -> ComplexMatrix {
    let d = m.rows();
    let ops = heisenberg_weyl(d);
    let mut acc = ComplexMatrix::zeros(d, d);
    for w in &ops {
        acc += &m.conjugate_by(w);
    }
    acc.scale(1.0 / (d * d) as f64)
}
