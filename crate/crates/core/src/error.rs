use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("polar decomposition is degenerate (eigenvalue {eigenvalue:e} too close to zero)")]
    PolarDegenerate { eigenvalue: f64 },

    #[error("vector is not unit-norm (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("matrix has no nonzero entry to normalize by")]
    ZeroScale,

    #[error("row {row} has norm {norm} > 1; normalize the matrix first")]
    NotNormalized { row: usize, norm: f64 },

    #[error("spectral norm {norm} exceeds 1, sqrt(I - A^2) does not exist")]
    SpectralRadius { norm: f64 },

    #[error("row {row} has norm {norm}, expected unit rows")]
    RowNorm { row: usize, norm: f64 },

    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("register dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("coefficient vector is not normalized (norm {norm})")]
    CoefficientNorm { norm: f64 },

    #[error("no amplitude on good states (probability {probability:e})")]
    NoGoodAmplitude { probability: f64 },

    #[error("dense operator of dimension {dim} exceeds the cap of {cap}")]
    DenseTooLarge { dim: usize, cap: usize },

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NotPositiveSemidefinite { .. }
                | Error::PolarDegenerate { .. }
                | Error::SpectralRadius { .. }
                | Error::NoGoodAmplitude { .. }
                | Error::ZeroScale
                | Error::NotOrthogonal { .. }
        )
    }
}
