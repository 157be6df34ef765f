//! Dense real linear algebra for small symmetric problems.

mod eigen;
mod householder;
mod matrix;

pub use eigen::{polar_symmetric, spectral_norm_symmetric, sqrt_psd, sym_eigen, EigenPair};
pub(crate) use eigen::polar_from_eigen;
pub use householder::{householder_from_vector, Reflector};
pub use matrix::{dot, norm2, Matrix};
