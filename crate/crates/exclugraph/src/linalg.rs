//! Dense symmetric linear algebra for the solvers: packed symmetric
//! storage, full-matrix helpers, and a cyclic Jacobi eigendecomposition.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric matrix with a single stored copy of each entry (packed upper
/// triangle, row major).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Real> SymmetricMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        SymmetricMatrix { n, data: vec![R::zero(); n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, R::one())
    }

    pub fn scaled_identity(n: usize, s: R) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, s);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrises an `n x n` row-major dense buffer.
    pub fn from_full(n: usize, full: &[R]) -> Self {
        debug_assert_eq!(full.len(), n * n);
        let half = R::real(0.5);
        Self::from_fn(n, |i, j| {
            if i == j {
                full[i * n + i]
            } else {
                (full[i * n + j] + full[j * n + i]) * half
            }
        })
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> R {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn trace(&self) -> R {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product `<self, other>`.
    pub fn dot(&self, other: &SymmetricMatrix<R>) -> R {
        debug_assert_eq!(self.n, other.n);
        let mut acc = R::zero();
        let two = R::real(2.0);
        for i in 0..self.n {
            acc += self.get(i, i) * other.get(i, i);
            for j in (i + 1)..self.n {
                acc += two * self.get(i, j) * other.get(i, j);
            }
        }
        acc
    }

    pub fn scale(&mut self, s: R) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &SymmetricMatrix<R>, s: R) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b * s;
        }
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |m, v| m.max(v.abs()))
    }

    /// Expands to a row-major dense buffer.
    pub fn to_full(&self) -> Vec<R> {
        let mut full = vec![R::zero(); self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                full[i * self.n + j] = self.get(i, j);
            }
        }
        full
    }

    /// Smallest eigenvalue, via the Jacobi decomposition.
    pub fn min_eigenvalue(&self) -> Result<R> {
        Ok(symmetric_eigen(self)?.eigenvalues[0])
    }
}

/// Eigendecomposition of a symmetric matrix: `M = Q diag(values) Q^T`.
#[derive(Debug, Clone)]
pub struct Spectrum<R> {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<R>,
    /// Column-major orthonormal eigenvectors: `vectors[k*n..(k+1)*n]` pairs
    /// with `eigenvalues[k]`.
    pub eigenvectors: Vec<R>,
    pub dim: usize,
}

impl<R: Real> Spectrum<R> {
    /// Rebuilds `Q f(diag) Q^T` as a symmetric matrix.
    pub fn apply(&self, f: impl Fn(R) -> R) -> SymmetricMatrix<R> {
        let n = self.dim;
        let vals: Vec<R> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        SymmetricMatrix::from_fn(n, |i, j| {
            let mut acc = R::zero();
            for (k, &v) in vals.iter().enumerate() {
                acc += v * self.eigenvectors[k * n + i] * self.eigenvectors[k * n + j];
            }
            acc
        })
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations. Reliable for every real symmetric matrix;
/// quadratic convergence once the off-diagonal mass is small.
pub fn symmetric_eigen<R: Real>(m: &SymmetricMatrix<R>) -> Result<Spectrum<R>> {
    let n = m.dim();
    let mut a = m.to_full();
    // q starts as the identity, accumulates rotations row-major
    let mut q = vec![R::zero(); n * n];
    for i in 0..n {
        q[i * n + i] = R::one();
    }

    // Convergence floor: each off-diagonal entry bottoms out near
    // eps * scale, so the summed mass cannot drop below ~n^2 * eps * scale.
    let scale = m.max_abs().max(R::one());
    let tol = R::epsilon() * scale * R::real((n * n) as f64);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = R::zero();
        for p in 0..n {
            for r in (p + 1)..n {
                off += a[p * n + r].abs();
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for r in (p + 1)..n {
                let apq = a[p * n + r];
                if apq.abs() <= R::epsilon() * scale {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[r * n + r];
                let theta = (aqq - app) / (R::real(2.0) * apq);
                let t = {
                    let t = R::one() / (theta.abs() + (R::one() + theta * theta).sqrt());
                    if theta < R::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = R::one() / (R::one() + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and r of a
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + r];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + r] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[r * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[r * n + k] = s * apk + c * aqk;
                }
                // accumulate eigenvectors (rows of q are the vectors here)
                for k in 0..n {
                    let qpk = q[p * n + k];
                    let qqk = q[r * n + k];
                    q[p * n + k] = c * qpk - s * qqk;
                    q[r * n + k] = s * qpk + c * qqk;
                }
            }
        }
    }
    if !converged {
        // final check after the last sweep
        let mut off = R::zero();
        for p in 0..n {
            for r in (p + 1)..n {
                off += a[p * n + r].abs();
            }
        }
        if off > tol {
            return Err(Error::Numerical(format!(
                "Jacobi eigendecomposition did not converge in {JACOBI_MAX_SWEEPS} sweeps \
                 (off-diagonal mass {off:e})"
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<R> = (0..n).map(|i| a[i * n + i]).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).expect("eigenvalues are finite"));
    let eigenvalues: Vec<R> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = vec![R::zero(); n * n];
    for (k, &i) in order.iter().enumerate() {
        eigenvectors[k * n..(k + 1) * n].copy_from_slice(&q[i * n..(i + 1) * n]);
    }
    Ok(Spectrum { eigenvalues, eigenvectors, dim: n })
}

/// Row-major product of two `n x n` dense buffers.
pub(crate) fn mat_mul<R: Real>(n: usize, a: &[R], b: &[R]) -> Vec<R> {
    let mut c = vec![R::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == R::zero() {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

/// Cholesky factorisation of a dense symmetric positive-definite matrix
/// (lower factor, row-major). Fails on a non-positive pivot.
pub(crate) fn cholesky<R: Real>(n: usize, a: &[R]) -> Result<Vec<R>> {
    let mut l = vec![R::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= R::zero() {
                    return Err(Error::Numerical(format!(
                        "Cholesky pivot {sum:e} at index {i}; matrix not positive definite"
                    )));
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solves `L L^T x = b` in place given the lower Cholesky factor.
pub(crate) fn cholesky_solve<R: Real>(n: usize, l: &[R], b: &mut [R]) {
    // forward
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * n + k] * b[k];
        }
        b[i] = sum / l[i * n + i];
    }
    // backward
    for i in (0..n).rev() {
        let mut sum = b[i];
        for k in (i + 1)..n {
            sum -= l[k * n + i] * b[k];
        }
        b[i] = sum / l[i * n + i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reconstruction_error(m: &SymmetricMatrix<f64>, s: &Spectrum<f64>) -> f64 {
        let n = m.dim();
        let rebuilt = s.apply(|l| l);
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                err = err.max((rebuilt.get(i, j) - m.get(i, j)).abs());
            }
        }
        err
    }

    #[test]
    fn identity_spectrum() {
        let m = SymmetricMatrix::<f64>::identity(3);
        let s = symmetric_eigen(&m).unwrap();
        for l in &s.eigenvalues {
            assert_abs_diff_eq!(*l, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let mut m = SymmetricMatrix::<f64>::zeros(3);
        m.set(0, 0, 1.0);
        m.set(1, 1, 2.0);
        m.set(2, 2, 3.0);
        let s = symmetric_eigen(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[2], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn exchange_matrix_spectrum() {
        let mut m = SymmetricMatrix::<f64>::zeros(2);
        m.set(0, 1, 1.0);
        let s = symmetric_eigen(&m).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        // fixed dense symmetric matrix
        let vals = [
            [4.0, 1.0, -2.0, 0.5],
            [1.0, 3.0, 0.0, 1.5],
            [-2.0, 0.0, 5.0, -1.0],
            [0.5, 1.5, -1.0, 2.0],
        ];
        let m = SymmetricMatrix::from_fn(4, |i, j| vals[i][j]);
        let s = symmetric_eigen(&m).unwrap();
        assert!(reconstruction_error(&m, &s) <= 1e-10 * 4.0);
        // Q^T Q = I
        let n = 4;
        for a in 0..n {
            for b in 0..n {
                let dot: f64 =
                    (0..n).map(|i| s.eigenvectors[a * n + i] * s.eigenvectors[b * n + i]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn one_by_one() {
        let m = SymmetricMatrix::from_fn(1, |_, _| 7.5);
        let s = symmetric_eigen(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![7.5]);
    }

    #[test]
    fn cholesky_round_trip() {
        let m = SymmetricMatrix::from_fn(3, |i, j| if i == j { 4.0 } else { 1.0 });
        let l = cholesky(3, &m.to_full()).unwrap();
        let mut b = vec![1.0, 2.0, 3.0];
        let expected = b.clone();
        cholesky_solve(3, &l, &mut b);
        // multiply back
        let full = m.to_full();
        for i in 0..3 {
            let axi: f64 = (0..3).map(|j| full[i * 3 + j] * b[j]).sum();
            assert_abs_diff_eq!(axi, expected[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut m = SymmetricMatrix::<f64>::zeros(2);
        m.set(0, 0, 1.0);
        m.set(1, 1, -1.0);
        assert!(cholesky(2, &m.to_full()).is_err());
    }

    #[test]
    fn packed_storage_is_single_copy() {
        let mut m = SymmetricMatrix::<f64>::zeros(3);
        m.set(2, 0, 5.0);
        assert_eq!(m.get(0, 2), 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.data.len(), 6);
    }
}
