use crate::error::{Error, Result};
use crate::linalg::matrix::{dot, norm2, Matrix};
use crate::scalar::Real;

/// Householder reflector `I - 2 v v^T / ||v||^2` with `v = e0 - u`, stored
/// implicitly. It swaps `e0` and `u`, is symmetric and is its own inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflector<T> {
    /// `None` when `u` coincides with `e0` and the reflector is the identity.
    v: Option<Vec<T>>,
    beta: T,
    dim: usize,
}

impl<T: Real> Reflector<T> {
    /// Reflector mapping `e0` to `u`; `u` must be unit-norm within `1e-12`.
    pub fn from_unit_vector(u: &[T]) -> Result<Self> {
        Self::with_tolerance(u, T::tol(1e-12))
    }

    /// As [`Reflector::from_unit_vector`] with a caller-chosen norm
    /// tolerance. The reflector is exactly orthogonal either way; only
    /// `R e0 = u` degrades with the norm defect.
    pub(crate) fn with_tolerance(u: &[T], tol: T) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        let norm = norm2(u);
        if (norm - T::one()).abs() > tol {
            return Err(Error::NotUnitVector { norm: norm.as_f64() });
        }
        let mut v: Vec<T> = u.iter().map(|&x| -x).collect();
        v[0] += T::one();
        let vv = dot(&v, &v);
        if vv.sqrt() < T::tol(1e-12) {
            return Ok(Reflector {
                v: None,
                beta: T::zero(),
                dim: u.len(),
            });
        }
        Ok(Reflector {
            v: Some(v),
            beta: T::lit(2.0) / vv,
            dim: u.len(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Reflector {
            v: None,
            beta: T::zero(),
            dim,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        self.v.is_none()
    }

    /// In-place `x <- R x`, O(n).
    pub fn apply(&self, x: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim);
        if let Some(v) = &self.v {
            let w = self.beta * dot(v, x);
            for (xi, &vi) in x.iter_mut().zip(v) {
                *xi -= w * vi;
            }
        }
    }

    /// Apply to every column of a row-major `dim x width` array:
    /// `X <- R X` where `x[a * width + s]` is entry `(a, s)`.
    pub fn apply_to_columns(&self, x: &mut [T], width: usize) {
        debug_assert_eq!(x.len(), self.dim * width);
        let Some(v) = &self.v else { return };
        let mut w = vec![T::zero(); width];
        for (row, &va) in x.chunks_exact(width).zip(v) {
            if va != T::zero() {
                for (wi, &xi) in w.iter_mut().zip(row) {
                    *wi += va * xi;
                }
            }
        }
        for wi in &mut w {
            *wi *= self.beta;
        }
        for (row, &va) in x.chunks_exact_mut(width).zip(v) {
            if va != T::zero() {
                for (xi, &wi) in row.iter_mut().zip(&w) {
                    *xi -= va * wi;
                }
            }
        }
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        let mut m = Matrix::identity(self.dim);
        if let Some(v) = &self.v {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m[(i, j)] -= self.beta * v[i] * v[j];
                }
            }
        }
        m
    }
}

/// Dense Householder reflector `R` with `R e0 = u` and `R u = e0`.
pub fn householder_from_vector<T: Real>(u: &[T]) -> Result<Matrix<T>> {
    Ok(Reflector::from_unit_vector(u)?.to_matrix())
}
