//! Small dense complex linear algebra: row-major matrices, LU with partial
//! pivoting and Hermitian eigenvalues.
//!
//! Problem sizes here are tiny (dim ≤ ~40, Liouvillians ≤ ~800²), so plain
//! dense storage is used throughout.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)] // f64 methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has the wrong length");
        CMatrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.rows];
        self.mul_vec_into(v, &mut out);
        out
    }

    pub fn mul_vec_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.cols, "mul_vec shape mismatch");
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).iter().zip(v).fold(Complex64::zero(), |acc, (a, b)| acc + a * b);
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: Complex64, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add_scaled shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + c * b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "max_abs_diff shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Max absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|a| a.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Column-stacking vectorization: element (i, j) lands at `i + rows * j`.
    pub fn vectorize(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::zero(); self.rows * self.cols];
        for j in 0..self.cols {
            for i in 0..self.rows {
                v[i + self.rows * j] = self[(i, j)];
            }
        }
        v
    }

    /// Inverse of [`CMatrix::vectorize`].
    pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> CMatrix {
        assert_eq!(v.len(), rows * cols, "unvectorize length mismatch");
        CMatrix::from_fn(rows, cols, |i, j| v[i + rows * j])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returned when elimination meets an exactly zero pivot column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularMatrix {
    pub column: usize,
}

/// LU factorization `P A = L U` with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: CMatrix) -> Result<Lu, SingularMatrix> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows;
        let mut lu = a.data;
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (pivot_row, pivot_mag) = (k..n)
                .map(|i| (i, lu[i * n + k].norm_sqr()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag == 0.0 {
                return Err(SingularMatrix { column: k });
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }

            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_slice = &head[k * n..(k + 1) * n];
            let inv_pivot = pivot_slice[k].inv();
            for row in tail.chunks_exact_mut(n) {
                let factor = row[k] * inv_pivot;
                row[k] = factor;
                if factor.is_zero() {
                    continue;
                }
                for (r, p) in row[k + 1..].iter_mut().zip(&pivot_slice[k + 1..]) {
                    *r -= factor * p;
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Smallest pivot modulus, a cheap conditioning hint.
    pub fn min_pivot(&self) -> f64 {
        (0..self.n).map(|i| self.lu[i * self.n + i].norm()).fold(f64::INFINITY, f64::min)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s = row.iter().zip(&x[..i]).fold(Complex64::zero(), |acc, (l, xv)| acc + l * xv);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s = row[i + 1..].iter().zip(&x[i + 1..]).fold(Complex64::zero(), |acc, (u, xv)| acc + u * xv);
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(b.len(), n, "rhs length mismatch");
        // U^H y = b (lower triangular)
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = Complex64::zero();
            for (k, yk) in y.iter().enumerate().take(i) {
                s += self.lu[k * n + i].conj() * yk;
            }
            y[i] = (y[i] - s) / self.lu[i * n + i].conj();
        }
        // L^H z = y (unit upper triangular)
        for i in (0..n).rev() {
            let mut s = Complex64::zero();
            for (k, yk) in y.iter().enumerate().skip(i + 1) {
                s += self.lu[k * n + i].conj() * yk;
            }
            y[i] -= s;
        }
        let mut x = vec![Complex64::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    /// Estimates the smallest singular value by inverse iteration on `A^H A`.
    pub fn estimate_min_singular_value(&self, iterations: usize) -> f64 {
        let n = self.n;
        let mut x: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05)).collect();
        let mut growth = 0.0;
        for _ in 0..iterations.max(1) {
            let norm = norm2(&x);
            x.iter_mut().for_each(|z| *z /= norm);
            let y = self.solve_adjoint(&x);
            x = self.solve(&y);
            growth = norm2(&x);
        }
        if growth > 0.0 && growth.is_finite() {
            1.0 / growth.sqrt()
        } else {
            0.0
        }
    }
}

/// Compressed sparse rows, used for repeated matrix–vector products.
#[derive(Clone, Debug)]
pub struct SparseRows {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseRows {
    /// Keeps every entry that is not exactly zero.
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut offsets = Vec::with_capacity(m.rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for i in 0..m.rows {
            for (j, v) in m.row(i).iter().enumerate() {
                if !v.is_zero() {
                    indices.push(j);
                    values.push(*v);
                }
            }
            offsets.push(indices.len());
        }
        SparseRows { rows: m.rows, cols: m.cols, offsets, indices, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn mul_vec_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.cols);
        assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            let range = self.offsets[i]..self.offsets[i + 1];
            *o = self.indices[range.clone()]
                .iter()
                .zip(&self.values[range])
                .fold(Complex64::zero(), |acc, (&j, a)| acc + a * v[j]);
        }
    }
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Uses cyclic Jacobi rotations on the real symmetric embedding
/// `[[Re H, -Im H], [Im H, Re H]]`, whose spectrum is that of `H` with every
/// eigenvalue doubled. Only the Hermitian part of the input is used.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues need a square matrix");
    let n = h.rows;
    let m = 2 * n;
    let mut a = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[(i + n) * m + j] = z.im;
            a[i * m + (j + n)] = -z.im;
        }
    }
    jacobi_symmetric(&mut a, m);
    let mut diag: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    diag.sort_by(|x, y| x.total_cmp(y));
    diag.into_iter().step_by(2).collect()
}

fn jacobi_symmetric(a: &mut [f64], m: usize) {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += a[p * m + q] * a[p * m + q];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            return;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..m {
                    let arp = a[r * m + p];
                    let arq = a[r * m + q];
                    a[r * m + p] = c * arp - s * arq;
                    a[r * m + q] = s * arp + c * arq;
                }
                for r in 0..m {
                    let apr = a[p * m + r];
                    let aqr = a[q * m + r];
                    a[p * m + r] = c * apr - s * aqr;
                    a[q * m + r] = s * apr + c * aqr;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, seed: u64) -> CMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        CMatrix::from_fn(n, n, |_, _| c(next(), next()))
    }

    #[test]
    fn lu_solves_random_system() {
        let a = sample(12, 7);
        let x: Vec<Complex64> = (0..12).map(|i| c(i as f64, 1.0 - i as f64 * 0.3)).collect();
        let b = a.mul_vec(&x);
        let lu = Lu::factor(a.clone()).unwrap();
        let got = lu.solve(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-10);
        }
        let bh = a.adjoint().mul_vec(&x);
        let got = lu.solve_adjoint(&bh);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-10);
        }
    }

    #[test]
    fn lu_reports_singular_matrix() {
        let mut a = CMatrix::identity(3);
        a[(1, 1)] = Complex64::zero();
        assert_eq!(Lu::factor(a).unwrap_err(), SingularMatrix { column: 1 });
    }

    #[test]
    fn min_singular_value_of_diagonal() {
        let mut a = CMatrix::identity(4);
        a[(2, 2)] = c(0.0, 1e-3);
        a[(0, 0)] = c(5.0, 0.0);
        let sigma = Lu::factor(a).unwrap().estimate_min_singular_value(20);
        assert!((sigma - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn hermitian_spectrum_of_pauli_y() {
        let y = CMatrix::from_row_major(2, 2, alloc::vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_spectrum_matches_trace_and_frobenius() {
        let a = sample(9, 3);
        let h = a.add_scaled(c(1.0, 0.0), &a.adjoint());
        let ev = hermitian_eigenvalues(&h);
        let tr: f64 = ev.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-10);
        let fro: f64 = h.as_slice().iter().map(|z| z.norm_sqr()).sum();
        let sq: f64 = ev.iter().map(|x| x * x).sum();
        assert!((fro - sq).abs() < 1e-9);
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let m = CMatrix::from_fn(2, 3, |i, j| c((i * 10 + j) as f64, 0.0));
        let v = m.vectorize();
        assert_eq!(v[1], c(10.0, 0.0));
        assert_eq!(v[2], c(1.0, 0.0));
        assert_eq!(CMatrix::unvectorize(&v, 2, 3), m);
    }

    #[test]
    fn sparse_matches_dense_product() {
        let mut a = sample(10, 11);
        for i in 0..10 {
            a[(i, (i + 3) % 10)] = Complex64::zero();
        }
        let x: Vec<Complex64> = (0..10).map(|i| c(0.1 * i as f64, -0.2)).collect();
        let sparse = SparseRows::from_dense(&a);
        assert_eq!(sparse.nnz(), 90);
        let mut out = alloc::vec![Complex64::zero(); 10];
        sparse.mul_vec_into(&x, &mut out);
        for (s, d) in out.iter().zip(a.mul_vec(&x)) {
            assert!((s - d).norm() < 1e-14);
        }
    }
}
