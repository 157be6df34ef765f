//! Symmetric eigendecomposition by cyclic Jacobi rotations, and the spectral
//! routines derived from it: PSD square root, polar factors of a symmetric
//! matrix and the spectral norm.

use crate::error::{Error, Result};
use crate::linalg::matrix::Matrix;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 50;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenPair<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> EigenPair<T> {
    /// `Q f(Λ) Q^T`, mirrored so the result is exactly symmetric.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let q = &self.vectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: T = (0..n).map(|k| q[(i, k)] * fv[k] * q[(j, k)]).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map_spectrum(|l| l)
    }
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a symmetric matrix.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops to
/// `1e-12 * ||S||_F`. Eigenvectors are sign-normalized so the largest
/// magnitude entry of each column is positive.
pub fn sym_eigen<T: Real>(s: &Matrix<T>) -> Result<EigenPair<T>> {
    s.check_symmetric()?;
    let n = s.rows();
    let mut a = s.clone();
    let mut v = Matrix::identity(n);
    let threshold = T::tol(1e-12) * s.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off.as_f64(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for i in 1..n {
            if v[(i, src)].abs() > v[(pivot, src)].abs() {
                pivot = i;
            }
        }
        let sign = if v[(pivot, src)] < T::zero() { -T::one() } else { T::one() };
        for i in 0..n {
            vectors[(i, col)] = sign * v[(i, src)];
        }
    }
    Ok(EigenPair { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates into `v`.
fn rotate<T: Real>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == T::zero() {
        return;
    }
    let n = a.rows();
    let two = T::lit(2.0);
    let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
    let c = T::one() / t.hypot(T::one());
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
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Symmetric PSD square root. Eigenvalues in `[-1e-10, 0)` are clamped to 0.
pub fn sqrt_psd<T: Real>(s: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = sym_eigen(s)?;
    let floor = -T::tol(1e-10);
    if let Some(&bad) = eig.values.iter().find(|&&l| l < floor) {
        return Err(Error::NotPositiveSemidefinite {
            eigenvalue: bad.as_f64(),
        });
    }
    Ok(eig.map_spectrum(|l| l.max(T::zero()).sqrt()))
}

/// Polar factors `S = Ũ H̃` of a symmetric matrix: `Ũ = Q sign(Λ) Q^T`,
/// `H̃ = Q |Λ| Q^T`.
pub fn polar_symmetric<T: Real>(s: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let eig = sym_eigen(s)?;
    polar_from_eigen(&eig)
}

pub(crate) fn polar_from_eigen<T: Real>(eig: &EigenPair<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let cutoff = T::tol(1e-12);
    if let Some(&bad) = eig.values.iter().find(|&&l| l.abs() < cutoff) {
        return Err(Error::PolarDegenerate {
            eigenvalue: bad.as_f64(),
        });
    }
    let unitary = eig.map_spectrum(|l| l.signum());
    let positive = eig.map_spectrum(|l| l.abs());
    Ok((unitary, positive))
}

/// `max |λ|` of a symmetric matrix.
pub fn spectral_norm_symmetric<T: Real>(s: &Matrix<T>) -> Result<T> {
    let eig = sym_eigen(s)?;
    Ok(eig.values.iter().fold(T::zero(), |m, &l| m.max(l.abs())))
}
