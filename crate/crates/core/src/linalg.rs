//! Small dense linear algebra over a generic scalar.
//!
//! Matrices here are at most a handful of rows (chart dimension, map target
//! dimension, sample grids for rank-1 fits), so a row-major `Vec` is enough.

use std::ops::{Index, IndexMut};

use crate::scalar::{lit, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mul_vec shape");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * lit(0.5))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s = s + x[i] * self[(i, j)] * y[j];
            }
        }
        s
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        if scale == T::zero() || !scale.is_finite() {
            return None;
        }
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[(r, col)].abs() > a[(piv, col)].abs() {
                    piv = r;
                }
            }
            if a[(piv, col)].abs() <= scale * T::epsilon() * lit(16.0) {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    inv.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[(col, col)];
            for j in 0..n {
                a[(col, j)] = a[(col, j)] / d;
                inv[(col, j)] = inv[(col, j)] / d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f != T::zero() {
                        for j in 0..n {
                            a[(r, j)] = a[(r, j)] - f * a[(col, j)];
                            inv[(r, j)] = inv[(r, j)] - f * inv[(col, j)];
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[(r, col)].abs() > a[(piv, col)].abs() {
                    piv = r;
                }
            }
            if a[(piv, col)] == T::zero() {
                return T::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = a[(col, col)];
            det = det * d;
            for r in col + 1..n {
                let f = a[(r, col)] / d;
                for j in col..n {
                    a[(r, j)] = a[(r, j)] - f * a[(col, j)];
                }
            }
        }
        det
    }

    /// Lower-triangular Cholesky factor, `None` unless positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return None;
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Self {
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            inv[(i, i)] = T::one() / self[(i, i)];
            for j in 0..i {
                let mut s = T::zero();
                for k in j..i {
                    s = s + self[(i, k)] * inv[(k, j)];
                }
                inv[(i, j)] = -s / self[(i, i)];
            }
        }
        inv
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
    /// Eigenvalues are sorted ascending; column `k` of the returned matrix is
    /// the eigenvector of eigenvalue `k`.
    pub fn sym_eigen(&self) -> (Vec<T>, Self) {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.symmetrize();
        let mut v = Self::identity(n);
        let norm = a.frobenius_norm();
        for _sweep in 0..100 {
            let mut off = T::zero();
            for i in 0..n {
                for j in i + 1..n {
                    off = off + a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= norm * T::epsilon() * lit(0.5) || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (apq + apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
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
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
        let vals = order.iter().map(|&i| a[(i, i)]).collect();
        let vecs = Self::from_fn(n, n, |r, c| v[(r, order[c])]);
        (vals, vecs)
    }

    pub fn sym_eigenvalues(&self) -> Vec<T> {
        self.sym_eigen().0
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of the pencil `A x = lambda B x` with `B` positive definite,
/// ascending. Returns `None` if `B` is not positive definite.
pub fn generalized_eigenvalues<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Option<Vec<T>> {
    let l = b.cholesky()?;
    let li = l.lower_inverse();
    let c = li.matmul(a).matmul(&li.transpose());
    Some(c.sym_eigenvalues())
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Best rank-1 approximation `sigma u v^T` of `a` by power iteration on
/// `A^T A`. Returns `(sigma, u, v, relative Frobenius residual)`.
pub fn rank1_approx<T: Real>(a: &Mat<T>) -> (T, Vec<T>, Vec<T>, T) {
    let (r, c) = (a.rows(), a.cols());
    let total = a.frobenius_norm();
    if total == T::zero() {
        return (T::zero(), vec![T::zero(); r], vec![T::zero(); c], T::zero());
    }
    let ata = a.transpose().matmul(a);
    let mut v: Vec<T> = (0..c).map(|j| T::one() + lit::<T>(1e-3) * lit(j as f64)).collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x = *x / n0);
    for _ in 0..500 {
        let w = ata.mul_vec(&v);
        let nw = norm(&w);
        if nw == T::zero() {
            break;
        }
        let next: Vec<T> = w.iter().map(|&x| x / nw).collect();
        let delta = next.iter().zip(&v).fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()));
        v = next;
        if delta < T::epsilon() * lit(8.0) {
            break;
        }
    }
    let av = a.mul_vec(&v);
    let sigma = norm(&av);
    let u: Vec<T> = if sigma > T::zero() { av.iter().map(|&x| x / sigma).collect() } else { av };
    let mut res = T::zero();
    for i in 0..r {
        for j in 0..c {
            let d = a[(i, j)] - sigma * u[i] * v[j];
            res = res + d * d;
        }
    }
    (sigma, u, v, res.sqrt() / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let a: Mat<f64> = Mat::from_vec(3, 3, vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let inv = a.inverse().unwrap();
        let id = a.matmul(&inv);
        assert!(id.sub(&Mat::identity(3)).max_abs() < 1e-14);
        let d = a.det();
        let expect = 4.0 * (6.0 - 0.04) - 1.0 * (2.0 - 0.1) + 0.5 * (0.2 - 1.5);
        assert!((d - expect).abs() < 1e-12);
    }

    #[test]
    fn jacobi_eigen_reconstructs() {
        let a = Mat::from_vec(3, 3, vec![2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let (vals, vecs) = a.sym_eigen();
        let s2 = 2f64.sqrt();
        let expect = [2.0 - s2, 2.0, 2.0 + s2];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-13);
        }
        let recon = vecs.matmul(&Mat::diag(&vals)).matmul(&vecs.transpose());
        assert!(recon.sub(&a).max_abs() < 1e-13);
    }

    #[test]
    fn generalized_eigen_matches_scaling() {
        let a: Mat<f64> = Mat::diag(&[2.0, 6.0]);
        let b = Mat::diag(&[2.0, 3.0]);
        let ev = generalized_eigenvalues(&a, &b).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rank1_exact_outer_product() {
        let a = Mat::from_fn(4, 3, |i, j| (1.0 + i as f64) * (2.0 - 0.3 * j as f64));
        let (_, _, _, res) = rank1_approx(&a);
        assert!(res < 1e-12);
        let b = Mat::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 });
        assert!(rank1_approx(&b).3 > 0.5);
    }
}
