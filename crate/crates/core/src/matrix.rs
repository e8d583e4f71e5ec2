//! Dense complex matrices in row-major order, plus the tensor-product
//! bookkeeping (Kronecker products, partial traces, subsystem permutations)
//! that every other module builds on.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};
#[allow(unused_imports)]
use crate::Float;

pub type C64 = num_complex::Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(invalid!("ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::from_vec(n, m, data)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// The rank-one operator `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn scale(&self, a: f64) -> Self {
        self.scale_complex(C64::new(a, 0.0))
    }

    pub fn scale_complex(&self, a: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * a).collect(),
        }
    }

    /// `‖M‖_max`, the largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[l * m..(l + 1) * m];
                for (o, &b) in row.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix {
            rows: n,
            cols: m,
            data: out,
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, rhs: &ComplexMatrix) -> C64 {
        assert!(self.cols == rhs.rows && self.rows == rhs.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for l in 0..self.cols {
                acc += self[(i, l)] * rhs[(l, i)];
            }
        }
        acc
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> ComplexMatrix {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let (r1, c1, r2, c2) = (self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out[(i * r2 + k, j * c2 + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Kronecker product of two matrices.
pub fn tensor(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    x.kron(y)
}

/// Flat-index offsets contributed by each value of a multi-index over `subsystems`.
fn offsets(dims: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let total: usize = subsystems.iter().map(|&s| dims[s]).product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; subsystems.len()];
    for _ in 0..total {
        out.push(subsystems.iter().zip(&digits).map(|(&s, &d)| d * strides[s]).sum());
        for k in (0..subsystems.len()).rev() {
            digits[k] += 1;
            if digits[k] < dims[subsystems[k]] {
                break;
            }
            digits[k] = 0;
        }
    }
    out
}

fn check_square_dims(x: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows,
            cols: x.cols,
        });
    }
    let total: usize = dims.iter().product();
    if total != x.rows {
        return Err(Error::DimensionMismatch {
            expected: x.rows,
            found: total,
        });
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`; kept subsystems retain their original order.
pub fn partial_trace(x: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square_dims(x, dims)?;
    if keep.is_empty() {
        return Err(invalid!("partial trace must keep at least one subsystem"));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(invalid!("invalid subsystem index set {:?}", keep));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let keep_off = offsets(dims, &kept);
    let trace_off = offsets(dims, &traced);
    let k = keep_off.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for (r, &ro) in keep_off.iter().enumerate() {
        for (c, &co) in keep_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &trace_off {
                acc += x[(ro + t, co + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: subsystem `j` of the output is subsystem `order[j]` of the input.
pub fn permute_subsystems(x: &ComplexMatrix, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix> {
    check_square_dims(x, dims)?;
    let mut seen = order.to_vec();
    seen.sort_unstable();
    if seen != (0..dims.len()).collect::<Vec<_>>() {
        return Err(invalid!("{:?} is not a permutation of the subsystems", order));
    }
    let map = offsets(dims, order);
    let n = x.rows;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| x[(map[i], map[j])]))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

fn zip_with(a: &ComplexMatrix, b: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> ComplexMatrix {
    assert!(a.rows == b.rows && a.cols == b.cols, "shape mismatch");
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        for (x, y) in self.data.iter_mut().zip(&rhs.data) {
            *x += y;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(k, ComplexMatrix::identity(6));
    }

    #[test]
    fn kron_of_diagonals() {
        let k = tensor(
            &ComplexMatrix::from_diagonal(&[1.0, 2.0]),
            &ComplexMatrix::from_diagonal(&[3.0]),
        );
        assert_eq!(k, ComplexMatrix::from_diagonal(&[3.0, 6.0]));
        let zz = tensor(&pauli_z(), &pauli_z());
        assert_eq!(zz, ComplexMatrix::from_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]).unwrap();
        let b = ComplexMatrix::from_diagonal(&[0.2, 0.5, 0.3]);
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        assert!((&ra - &a).max_abs() < 1e-15);
        let rb = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        assert!((&rb - &b).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_input() {
        let x = ComplexMatrix::identity(6);
        assert!(matches!(
            partial_trace(&x, &[2, 2], &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(partial_trace(&x, &[2, 3], &[]).is_err());
        assert!(partial_trace(&x, &[2, 3], &[2]).is_err());
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[5.0, 6.0, 7.0], &[8.0, 9.0, 1.0], &[2.0, 3.0, 4.0]]).unwrap();
        let swapped = permute_subsystems(&a.kron(&b), &[2, 3], &[1, 0]).unwrap();
        assert_eq!(swapped, b.kron(&a));
        assert!(permute_subsystems(&a.kron(&b), &[2, 3], &[0, 0]).is_err());
    }

    #[test]
    fn from_vec_validates() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ONE; 3]).is_err());
        assert_eq!(
            ComplexMatrix::from_vec(1, 1, vec![C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }
}
