//! Dense kernels: cyclic Jacobi for Hermitian matrices, one-sided Jacobi
//! singular values and Gram–Schmidt QR.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
#[allow(unused_imports)]
use crate::Float;

/// The 2×2 unitary `G` that diagonalizes `[[a, b], [b̄, d]]` through `G† M G`.
fn jacobi_rotation(a: f64, d: f64, b: C64) -> [C64; 4] {
    let b_abs = b.norm();
    let phase = b / b_abs;
    let tau = (d - a) / (2.0 * b_abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();
    [C64::new(c, 0.0), C64::new(s, 0.0), e * (-s), e * c]
}

fn rotation_needed(a: f64, d: f64, b_abs: f64, floor: f64) -> bool {
    b_abs > floor && b_abs > f64::EPSILON * (a.abs() * d.abs()).sqrt()
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
pub(crate) fn hermitian_eigen(m: &ComplexMatrix, max_sweeps: usize) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let floor = f64::MIN_POSITIVE.max(1e-32 * a.frobenius_norm());
    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == max_sweeps {
            return Err(Error::EigenNoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                if !rotation_needed(app, aqq, b.norm(), floor) {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(app, aqq, b);
                rotate_columns(&mut a, p, q, &g);
                rotate_rows_adjoint(&mut a, p, q, &g);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, &g);
            }
        }
        converged = !rotated;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// `X ← X G` restricted to columns `p`, `q`.
fn rotate_columns(x: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..x.rows() {
        let (xp, xq) = (x[(k, p)], x[(k, q)]);
        x[(k, p)] = xp * g[0] + xq * g[2];
        x[(k, q)] = xp * g[1] + xq * g[3];
    }
}

/// `X ← G† X` restricted to rows `p`, `q`.
fn rotate_rows_adjoint(x: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..x.cols() {
        let (xp, xq) = (x[(p, k)], x[(q, k)]);
        x[(p, k)] = g[0].conj() * xp + g[2].conj() * xq;
        x[(q, k)] = g[1].conj() * xp + g[3].conj() * xq;
    }
}

/// Singular values (descending) by one-sided Jacobi on the columns.
pub(crate) fn singular_values(m: &ComplexMatrix, max_sweeps: usize) -> Result<Vec<f64>> {
    let x = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, n) = (x.rows(), x.cols());
    // Columns stored contiguously for the pairwise updates.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| x.column(j)).collect();
    let floor = f64::MIN_POSITIVE.max(1e-32 * m.frobenius_norm().powi(2));
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(u, w)| u.conj() * w).sum();
                if !rotation_needed(alpha, beta, gamma.norm(), floor) {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let (xp, xq) = (cols[p][k], cols[q][k]);
                    cols[p][k] = xp * g[0] + xq * g[2];
                    cols[q][k] = xp * g[1] + xq * g[3];
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == max_sweeps {
            return Err(Error::EigenNoConvergence {
                sweeps,
                off_norm: f64::NAN,
            });
        }
    }
    let mut s: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Thin QR by Gram–Schmidt with reorthogonalization; `R` has a positive real diagonal.
///
/// Returns `Q` (same shape as the input, orthonormal columns) and the diagonal of `R`.
pub(crate) fn thin_qr(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let (rows, n) = (m.rows(), m.cols());
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut r_diag = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for _ in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        r_diag.push(norm);
        q.push(v);
    }
    let out = ComplexMatrix::from_fn(rows, n, |i, j| q[j][i]);
    (out, r_diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
    }

    fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        random_matrix(n, n, rng).hermitian_part()
    }

    #[test]
    fn jacobi_reconstructs() {
        let mut rng = SeededRng::new(7, 0);
        for n in [1, 2, 3, 5, 8, 17, 32] {
            let m = random_hermitian(n, &mut rng);
            let (vals, v) = hermitian_eigen(&m, 64).unwrap();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let rec = ComplexMatrix::from_diagonal(&vals).conjugate_by(&v);
            let scale = m.max_abs().max(1.0);
            assert!((&rec - &m).max_abs() <= 1e-12 * scale, "n = {n}");
            let gram = v.adjoint().matmul(&v);
            assert!((&gram - &ComplexMatrix::identity(n)).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn jacobi_handles_degenerate_and_tiny_spectra() {
        let m = ComplexMatrix::from_diagonal(&[1e-300, 0.0, 2.0, 2.0]);
        let (vals, _) = hermitian_eigen(&m, 64).unwrap();
        assert_eq!(vals, [0.0, 1e-300, 2.0, 2.0]);
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let proj = ComplexMatrix::outer(&v);
        let (vals, _) = hermitian_eigen(&proj, 64).unwrap();
        assert!(vals[0].abs() < 1e-16 && (vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_values_match_hermitian_moduli() {
        let mut rng = SeededRng::new(8, 0);
        let m = random_hermitian(6, &mut rng);
        let (vals, _) = hermitian_eigen(&m, 64).unwrap();
        let mut moduli: Vec<f64> = vals.iter().map(|x| x.abs()).collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        let sv = singular_values(&m, 64).unwrap();
        for (a, b) in moduli.iter().zip(&sv) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_values_of_rectangular_matrix() {
        let mut rng = SeededRng::new(9, 0);
        let m = random_matrix(3, 5, &mut rng);
        let sv = singular_values(&m, 64).unwrap();
        assert_eq!(sv.len(), 3);
        let (gram_vals, _) = hermitian_eigen(&m.matmul(&m.adjoint()), 64).unwrap();
        let mut expect: Vec<f64> = gram_vals.iter().map(|x| x.sqrt()).collect();
        expect.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in expect.iter().zip(&sv) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn qr_gives_orthonormal_columns() {
        let mut rng = SeededRng::new(10, 0);
        let m = random_matrix(6, 4, &mut rng);
        let (q, r) = thin_qr(&m);
        let gram = q.adjoint().matmul(&q);
        assert!((&gram - &ComplexMatrix::identity(4)).max_abs() < 1e-13);
        assert!(r.iter().all(|&x| x > 0.0));
        // Q†M is upper triangular with the returned diagonal.
        let rfull = q.adjoint().matmul(&m);
        for i in 0..4 {
            assert!((rfull[(i, i)].re - r[i]).abs() < 1e-12);
            for j in 0..i {
                assert!(rfull[(i, j)].norm() < 1e-12);
            }
        }
    }
}
