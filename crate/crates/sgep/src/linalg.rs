//! Dense row-major matrices and the small amount of factorization machinery
//! the solvers need: Cholesky, a cyclic Jacobi symmetric eigensolver, and a
//! power-iteration spectral norm estimate.

use crate::error::{Result, SgepError};
use crate::scalar::{cast, Scalar};

/// Dense matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(SgepError::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// y = M x
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&m, &v)| m * v).sum())
            .collect()
    }

    /// xᵀ M x
    pub fn quad(&self, x: &[T]) -> T {
        let mx = self.matvec(x);
        dot(x, &mx)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn symmetrize(&mut self) {
        let half = cast::<T>(0.5);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let avg = (self[(i, j)] + self[(j, i)]) * half;
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    /// Principal submatrix on the given (sorted or not) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Mat<T> {
        let k = idx.len();
        let mut sub = Mat::zeros(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                sub[(a, b)] = self[(i, j)];
            }
        }
        sub
    }

    /// True when the matrix equals the identity entrywise within `tol`.
    pub fn is_identity_within(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { T::one() } else { T::zero() };
                if (self[(i, j)] - want).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

#[inline]
pub fn norm2<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

#[inline]
pub fn norm_inf<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky<T: Scalar>(m: &Mat<T>, name: &'static str) -> Result<Mat<T>> {
    let n = m.nrows();
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[(i, j)];
            for k in 0..j {
                sum = sum - l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= T::zero() {
                    return Err(SgepError::NotPositiveDefinite { name });
                }
                l[(i, i)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Solves L z = b with L lower triangular.
pub fn solve_lower<T: Scalar>(l: &Mat<T>, b: &[T]) -> Vec<T> {
    let n = l.nrows();
    let mut z = vec![T::zero(); n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum = sum - l[(i, k)] * z[k];
        }
        z[i] = sum / l[(i, i)];
    }
    z
}

/// Solves Lᵀ z = b with L lower triangular.
pub fn solve_lower_transpose<T: Scalar>(l: &Mat<T>, b: &[T]) -> Vec<T> {
    let n = l.nrows();
    let mut z = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in (i + 1)..n {
            sum = sum - l[(k, i)] * z[k];
        }
        z[i] = sum / l[(i, i)];
    }
    z
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// columns of the second component.
pub fn jacobi_eigh<T: Scalar>(m: &Mat<T>) -> (Vec<T>, Mat<T>) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = Mat::identity(n);
    if n <= 1 {
        let vals = if n == 1 { vec![a[(0, 0)]] } else { vec![] };
        return (vals, v);
    }
    let eps = T::epsilon() * cast::<T>(64.0);
    let scale = a.max_abs().max(T::one());
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= eps * scale * cast::<T>(1e-3) {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (cast::<T>(2.0) * apq);
                let t = {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let vals = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[(k, new)] = v[(k, old)];
        }
    }
    (vals, vecs)
}

/// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
pub fn spectral_norm_sym<T: Scalar>(m: &Mat<T>) -> T {
    let n = m.nrows();
    if n == 0 {
        return T::zero();
    }
    // deterministic start with all coordinates active
    let mut x: Vec<T> = (0..n).map(|i| T::one() + cast::<T>(i as f64 + 1.0).recip()).collect();
    let tol = cast::<T>(1e-10);
    let mut lambda = T::zero();
    for _ in 0..50 {
        let y = m.matvec(&x);
        let ny = norm2(&y);
        if ny == T::zero() {
            return T::zero();
        }
        let next = ny;
        x = y.iter().map(|&v| v / ny).collect();
        if (next - lambda).abs() <= tol * next.max(T::one()) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<f64>>) -> Mat<f64> {
        Mat::from_rows(rows).unwrap()
    }

    #[test]
    fn cholesky_recovers_spd_factor() {
        let m = mat(vec![vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = cholesky(&m, "m").unwrap();
        assert!((l[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((l[(1, 0)] - 1.0).abs() < 1e-12);
        assert!((l[(1, 1)] - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = mat(vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(cholesky(&m, "m").is_err());
    }

    #[test]
    fn jacobi_matches_known_spectrum() {
        let m = mat(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let (vals, vecs) = jacobi_eigh(&m);
        assert!((vals[0] - 3.0).abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
        // eigenvector for 3 is (1,1)/sqrt(2) up to sign
        let r = vecs[(0, 0)] / vecs[(1, 0)];
        assert!((r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = mat(vec![vec![3.0, 0.0, 0.0], vec![0.0, 7.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((spectral_norm_sym(&m) - 7.0).abs() < 1e-8);
    }

    #[test]
    fn triangular_solves_roundtrip() {
        let m = mat(vec![vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = cholesky(&m, "m").unwrap();
        let b = vec![1.0, -2.0];
        let z = solve_lower(&l, &b);
        let x = solve_lower_transpose(&l, &z);
        let back = m.matvec(&x);
        assert!((back[0] - b[0]).abs() < 1e-12 && (back[1] - b[1]).abs() < 1e-12);
    }
}
