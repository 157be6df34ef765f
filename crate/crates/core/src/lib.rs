//! Oblivious amplitude amplification for non-unitary symmetric matrices.
//!
//! A symmetric `A` is scaled by its largest row norm, embedded in an
//! orthogonal (or nearly orthogonal) `2d x 2d` block matrix, encoded as a
//! circuit acting on a `M x N` two-register state, and then amplified so
//! the good-register `|0>` component carries `A x / |A x|`.
//!
//! Everything numeric is generic over [`Real`]; the aliases at the bottom
//! of this file fix the scalar to `f64` (or `f32`).

pub mod amplification;
pub mod circuit;
pub mod embedding;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod matfunc;
pub mod metrics;
pub mod scalar;

pub use amplification::{
    iteration_count, oblivious_aa, standard_aa, IterationRecord, IterationTrace, ObliviousAmplifier, Variant,
};
pub use circuit::{
    apply_circuit, build_lcu_encoding, build_row_encoding, dense_matrix_of, CircuitForm, CircuitU, Register,
    StateVector,
};
pub use embedding::{
    build_estimated_embedding, build_exact_embedding, closeness, mu_normalize, ClosenessReport, Embedding,
    EmbeddingKind,
};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentKind, FinalRule};
pub use linalg::{householder_from_vector, polar_symmetric, sqrt_psd, sym_eigen, EigenPair, Matrix, Reflector};
pub use matfunc::{
    chained_product_circuit, cos_product_factors, exp_product_factors, matrix_function_oracle, MatrixFunction,
    ProductPlan,
};
pub use metrics::{fidelity, FidelityMode};
pub use scalar::Real;

pub type Mat = Matrix<f64>;
pub type MatF32 = Matrix<f32>;
pub type State = StateVector<f64>;
pub type Circuit = CircuitU<f64>;
pub type Eigen = EigenPair<f64>;
pub type Closeness = ClosenessReport<f64>;
pub type Trace = IterationTrace<f64>;
pub type Plan = ProductPlan<f64>;
