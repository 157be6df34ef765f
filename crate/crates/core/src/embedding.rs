//! Embedding a symmetric matrix `A` into the upper-left block of a larger
//! (almost) orthogonal matrix
//!
//! ```text
//! U = [ A  B ]
//!     [ B -A ]
//! ```
//!
//! Two couplings `B` are supported. The exact one, `B = sqrt(I - A^2)`,
//! makes `U` orthogonal but needs the eigendecomposition of `A` and
//! `||A||_2 <= 1`. The estimated one, `B = D` diagonal with
//! `D_ii = sqrt(1 - sum_j A_ij^2)`, is cheap and gives `U` unit rows, so it
//! is orthogonal only when `A^2 + D^2 = I`. How far it is from orthogonal is
//! measured through the polar decomposition by [`closeness`].

use crate::error::{Error, Result};
use crate::linalg::{polar_from_eigen, spectral_norm_symmetric, sym_eigen, Matrix};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingKind {
    Exact,
    Estimated,
}

#[derive(Clone, Debug)]
pub struct Embedding<T> {
    /// `A / mu`, the block actually embedded.
    pub a_normalized: Matrix<T>,
    pub mu: T,
    /// Off-diagonal block; diagonal for [`EmbeddingKind::Estimated`].
    pub coupling: Matrix<T>,
    pub u: Matrix<T>,
    pub kind: EmbeddingKind,
}

impl<T: Real> Embedding<T> {
    /// Order `d` of the embedded block (`u` has order `2d`).
    pub fn block_order(&self) -> usize {
        self.a_normalized.rows()
    }

    /// Diagonal of the coupling block, i.e. `D` for the estimated kind.
    pub fn d_diag(&self) -> Vec<T> {
        self.coupling.diagonal()
    }

    /// μ-normalize `a` and build the estimated embedding.
    pub fn estimated(a: &Matrix<T>) -> Result<Self> {
        let (an, mu) = mu_normalize(a)?;
        let mut e = build_estimated_embedding(&an)?;
        e.mu = mu;
        Ok(e)
    }

    /// μ-normalize `a` and build the exact embedding.
    pub fn exact(a: &Matrix<T>) -> Result<Self> {
        let (an, mu) = mu_normalize(a)?;
        let mut e = build_exact_embedding(&an)?;
        e.mu = mu;
        Ok(e)
    }
}

/// `(A / mu, mu)` with `mu` the largest row 2-norm of `A`.
pub fn mu_normalize<T: Real>(a: &Matrix<T>) -> Result<(Matrix<T>, T)> {
    a.check_symmetric()?;
    let mu = a.row_norms().into_iter().fold(T::zero(), T::max);
    if mu == T::zero() {
        return Err(Error::ZeroScale);
    }
    Ok((a.scale(T::one() / mu), mu))
}

fn assemble<T: Real>(a: &Matrix<T>, coupling: &Matrix<T>) -> Matrix<T> {
    Matrix::from_blocks(a, coupling, coupling, &a.scale(-T::one())).expect("square blocks of equal order")
}

/// Estimated embedding of an already normalized `A'` (every row norm at
/// most one). The returned `mu` is 1.
pub fn build_estimated_embedding<T: Real>(a: &Matrix<T>) -> Result<Embedding<T>> {
    a.check_symmetric()?;
    let limit = T::one() + T::tol(1e-12);
    let mut d = Vec::with_capacity(a.rows());
    for (row, norm) in a.row_norms().into_iter().enumerate() {
        if norm > limit {
            return Err(Error::NotNormalized {
                row,
                norm: norm.as_f64(),
            });
        }
        let sq: T = a.row(row).iter().map(|&x| x * x).sum();
        d.push((T::one() - sq).max(T::zero()).sqrt());
    }
    let coupling = Matrix::from_diag(&d);
    Ok(Embedding {
        u: assemble(a, &coupling),
        a_normalized: a.clone(),
        mu: T::one(),
        coupling,
        kind: EmbeddingKind::Estimated,
    })
}

/// Exact orthogonal extension with coupling `sqrt(I - A'^2)`.
///
/// The coupling is formed from the eigendecomposition of `A'` as
/// `Q sqrt(1 - Λ^2) Q^T`, the sine part of the cosine-sine form.
pub fn build_exact_embedding<T: Real>(a: &Matrix<T>) -> Result<Embedding<T>> {
    let eig = sym_eigen(a)?;
    let norm = eig.values.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    if norm > T::one() + T::tol(1e-10) {
        return Err(Error::SpectralRadius { norm: norm.as_f64() });
    }
    let coupling = eig.map_spectrum(|l| (T::one() - l * l).max(T::zero()).sqrt());
    Ok(Embedding {
        u: assemble(a, &coupling),
        a_normalized: a.clone(),
        mu: T::one(),
        coupling,
        kind: EmbeddingKind::Exact,
    })
}

/// Distance of a symmetric `U` to its nearest orthogonal matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosenessReport<T> {
    /// `||U - Ũ||_2^2 / ||U||_2^2`
    pub c2: T,
    /// `||U - Ũ||_F^2 / ||U||_F^2`
    pub c_frobenius: T,
    /// `2 trace(H̃)`
    pub phi: T,
    /// Estimated fidelity `(1 - c2)^2`.
    pub ef: T,
}

impl<T: Real> ClosenessReport<T> {
    /// `c2 > 1` is outside the range the fidelity estimate is meant for.
    pub fn exceeds_unity(&self) -> bool {
        self.c2 > T::one()
    }

    pub fn csv_header() -> &'static str {
        "c2,cF,phi,ef"
    }

    pub fn csv_row(&self) -> String {
        format!("{:?},{:?},{:?},{:?}", self.c2, self.c_frobenius, self.phi, self.ef)
    }
}

pub fn closeness<T: Real>(u: &Matrix<T>) -> Result<ClosenessReport<T>> {
    let eig = sym_eigen(u)?;
    let (nearest, positive) = polar_from_eigen(&eig)?;
    let diff = u.sub(&nearest)?;

    let diff_2 = spectral_norm_symmetric(&diff)?;
    let u_2 = spectral_norm_symmetric(u)?;
    let c2 = (diff_2 * diff_2) / (u_2 * u_2);

    let diff_f = diff.frobenius_norm();
    let u_f = u.frobenius_norm();
    let c_frobenius = (diff_f * diff_f) / (u_f * u_f);

    let phi = T::lit(2.0) * positive.trace();
    let ef = (T::one() - c2).powi(2);
    Ok(ClosenessReport {
        c2,
        c_frobenius,
        phi,
        ef,
    })
}
