//! Ancilla-based block encodings applied as structured operators on
//! two-register state vectors.
//!
//! Two forms are built:
//!
//! * **LCU** (`A = Σ k_i U_i`): `𝒰 = (H^{⊗m} ⊗ I) V (K ⊗ I)` with
//!   `V = diag(U_0, …, U_{M-1})` and `K` the reflector taking `|0>` to the
//!   coefficient vector. The top-left system block of `𝒰` is `A / sqrt(M)`
//!   and good states have the first register in `|0>`.
//! * **Row encoding** (any `U` with unit rows): `𝒰 = V (H^{⊗m} ⊗ I)` where
//!   block `i` of `V` is an orthogonal matrix whose first row is row `i` of
//!   `U`. Applied to `|0>|in>`, the amplitude of `(i, 0)` is
//!   `(U in)_i / sqrt(M)`, so good states have the *second* register in
//!   `|0>` while inputs are prepared with the first register in `|0>`.
//!
//! Whatever `U` is, `𝒰` itself is exactly orthogonal; non-unitarity of the
//! encoded matrix only shows up in the good block.

mod hadamard;
mod state;

pub use hadamard::fwht_first_register;
pub use state::{Register, StateVector};

use crate::error::{Error, Result};
use crate::linalg::{norm2, Matrix, Reflector};
use crate::scalar::Real;

/// Largest `M * N` for which [`CircuitU::dense_matrix`] will materialize
/// the operator.
pub const DENSE_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitForm {
    Lcu,
    RowEncoding,
}

/// One diagonal block of `V`.
#[derive(Clone, Debug)]
pub enum Block<T> {
    Dense(Matrix<T>),
    Reflector(Reflector<T>),
}

impl<T: Real> Block<T> {
    fn apply(&self, x: &mut [T]) {
        match self {
            Block::Dense(m) => {
                let y = m.mat_vec(x).expect("block order matches register");
                x.copy_from_slice(&y);
            }
            Block::Reflector(r) => r.apply(x),
        }
    }

    fn apply_transpose(&self, x: &mut [T]) {
        match self {
            Block::Dense(m) => {
                let y = m.mat_t_vec(x).expect("block order matches register");
                x.copy_from_slice(&y);
            }
            Block::Reflector(r) => r.apply(x),
        }
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        match self {
            Block::Dense(m) => m.clone(),
            Block::Reflector(r) => r.to_matrix(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CircuitU<T> {
    form: CircuitForm,
    blocks: Vec<Block<T>>,
    k_reflector: Option<Reflector<T>>,
    good_register: Register,
    m_dim: usize,
    n_dim: usize,
}

/// Row-encoding circuit for a square `U` whose rows are unit vectors.
/// The order of `U` must be a power of two.
pub fn build_row_encoding<T: Real>(u: &Matrix<T>) -> Result<CircuitU<T>> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let n = u.rows();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let tol = T::tol(1e-10);
    let blocks = (0..n)
        .map(|i| {
            let row = u.row(i);
            let norm = norm2(row);
            if (norm - T::one()).abs() > tol {
                return Err(Error::RowNorm {
                    row: i,
                    norm: norm.as_f64(),
                });
            }
            // a reflector swaps e0 and the row, so its first row is the row
            Ok(Block::Reflector(Reflector::with_tolerance(row, tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CircuitU {
        form: CircuitForm::RowEncoding,
        blocks,
        k_reflector: None,
        good_register: Register::Second,
        m_dim: n,
        n_dim: n,
    })
}

/// LCU circuit for `Σ k_i U_i`. The term count is padded to a power of two
/// with identity blocks and zero coefficients.
pub fn build_lcu_encoding<T: Real>(unitaries: &[Matrix<T>], coeffs: &[T]) -> Result<CircuitU<T>> {
    let first = unitaries
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no unitaries given".into()))?;
    if unitaries.len() != coeffs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} unitaries but {} coefficients",
            unitaries.len(),
            coeffs.len()
        )));
    }
    let n = first.rows();
    let tol = T::tol(1e-10);
    for u in unitaries {
        if u.rows() != n || u.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "unitaries of order {n} and {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        u.check_orthogonal(tol)?;
    }
    let norm = norm2(coeffs);
    if (norm - T::one()).abs() > tol {
        return Err(Error::CoefficientNorm { norm: norm.as_f64() });
    }

    let m = unitaries.len().next_power_of_two();
    let mut padded = coeffs.to_vec();
    padded.resize(m, T::zero());
    let mut blocks: Vec<Block<T>> = unitaries.iter().cloned().map(Block::Dense).collect();
    blocks.resize_with(m, || Block::Reflector(Reflector::identity(n)));

    Ok(CircuitU {
        form: CircuitForm::Lcu,
        blocks,
        k_reflector: Some(Reflector::with_tolerance(&padded, tol)?),
        good_register: Register::First,
        m_dim: m,
        n_dim: n,
    })
}

impl<T: Real> CircuitU<T> {
    pub fn form(&self) -> CircuitForm {
        self.form
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    pub fn k_reflector(&self) -> Option<Matrix<T>> {
        self.k_reflector.as_ref().map(Reflector::to_matrix)
    }

    /// Register whose `|0>` component marks the good states.
    pub fn good_register(&self) -> Register {
        self.good_register
    }

    /// Register prepared in `|0>` on input. The system input lives in the
    /// other one.
    pub fn input_register(&self) -> Register {
        Register::First
    }

    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    /// `|0>|system>` ready for [`CircuitU::apply`].
    pub fn prepare_input(&self, system: &[T]) -> Result<StateVector<T>> {
        if system.len() != self.n_dim {
            return Err(Error::DimensionMismatch(format!(
                "system input of length {} for a register of dimension {}",
                system.len(),
                self.n_dim
            )));
        }
        StateVector::with_first_zero(self.m_dim, system)
    }

    fn check(&self, s: &StateVector<T>) -> Result<()> {
        if s.m_dim() != self.m_dim || s.n_dim() != self.n_dim {
            return Err(Error::DimensionMismatch(format!(
                "state over {} x {} for a circuit over {} x {}",
                s.m_dim(),
                s.n_dim(),
                self.m_dim,
                self.n_dim
            )));
        }
        Ok(())
    }

    fn apply_v(&self, x: &mut [T], transpose: bool) {
        for (row, block) in x.chunks_exact_mut(self.n_dim).zip(&self.blocks) {
            if transpose {
                block.apply_transpose(row);
            } else {
                block.apply(row);
            }
        }
    }

    fn apply_k(&self, x: &mut [T]) {
        if let Some(k) = &self.k_reflector {
            k.apply_to_columns(x, self.n_dim);
        }
    }

    pub fn apply_in_place(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check(s)?;
        let (m, n) = (self.m_dim, self.n_dim);
        let x = s.amplitudes_mut();
        match self.form {
            CircuitForm::Lcu => {
                self.apply_k(x);
                self.apply_v(x, false);
                fwht_first_register(x, m, n);
            }
            CircuitForm::RowEncoding => {
                fwht_first_register(x, m, n);
                self.apply_v(x, false);
            }
        }
        Ok(())
    }

    /// `𝒰^{-1} = 𝒰^T`, applied as the reversed sequence of inverted layers.
    pub fn apply_inverse_in_place(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check(s)?;
        let (m, n) = (self.m_dim, self.n_dim);
        let x = s.amplitudes_mut();
        match self.form {
            CircuitForm::Lcu => {
                fwht_first_register(x, m, n);
                self.apply_v(x, true);
                self.apply_k(x);
            }
            CircuitForm::RowEncoding => {
                self.apply_v(x, true);
                fwht_first_register(x, m, n);
            }
        }
        Ok(())
    }

    pub fn apply(&self, s: &StateVector<T>) -> Result<StateVector<T>> {
        let mut out = s.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn apply_inverse(&self, s: &StateVector<T>) -> Result<StateVector<T>> {
        let mut out = s.clone();
        self.apply_inverse_in_place(&mut out)?;
        Ok(out)
    }

    /// Negate the amplitudes of the good states.
    pub fn apply_good_reflection(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check(s)?;
        s.reflect_zero(self.good_register);
        Ok(())
    }

    /// Negate the amplitudes whose input register is `|0>`.
    pub fn apply_input_reflection(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check(s)?;
        s.reflect_zero(self.input_register());
        Ok(())
    }

    /// Bring an output of [`CircuitU::apply`] back to the register layout
    /// the circuit consumes. For the row encoding this is the register swap
    /// that puts good states on the first register; LCU needs nothing.
    pub fn output_to_input_frame(&self, s: &mut StateVector<T>) -> Result<()> {
        self.check(s)?;
        if self.form == CircuitForm::RowEncoding {
            s.swap_registers();
        }
        Ok(())
    }

    /// Good-state amplitudes, renormalized, and their total probability.
    ///
    /// With `project_system_zero`, only the first half of the good vector
    /// (the leading qubit of the encoded system in `|0>`) is kept and the
    /// probability is that of the compound event.
    pub fn collapse_good(&self, s: &StateVector<T>, project_system_zero: bool) -> Result<(Vec<T>, T)> {
        self.check(s)?;
        let mut good: Vec<T> = s.zero_indices(self.good_register).map(|i| s.amplitudes()[i]).collect();
        if project_system_zero {
            if !good.len().is_multiple_of(2) {
                return Err(Error::DimensionMismatch(format!(
                    "cannot halve a good register of dimension {}",
                    good.len()
                )));
            }
            good.truncate(good.len() / 2);
        }
        let probability: T = good.iter().map(|&x| x * x).sum();
        if probability < T::lit(1e-30) || probability == T::zero() {
            return Err(Error::NoGoodAmplitude {
                probability: probability.as_f64(),
            });
        }
        let inv = T::one() / probability.sqrt();
        for x in &mut good {
            *x *= inv;
        }
        Ok((good, probability))
    }

    /// The full `MN x MN` operator, multiplied out from its dense layers
    /// (`(H⊗I) V (K⊗I)` or `V (H⊗I)`); independent of the structured path.
    pub fn dense_matrix(&self) -> Result<Matrix<T>> {
        let (m, n) = (self.m_dim, self.n_dim);
        let dim = m * n;
        if dim > DENSE_CAP {
            return Err(Error::DenseTooLarge { dim, cap: DENSE_CAP });
        }
        let scale = T::one() / T::from_usize(m).expect("register size fits").sqrt();
        let hadamard = Matrix::from_fn(m, m, |i, j| {
            if (i & j).count_ones() % 2 == 0 {
                scale
            } else {
                -scale
            }
        });
        let h_layer = kron_identity(&hadamard, n);
        let mut v = Matrix::zeros(dim, dim);
        for (b, block) in self.blocks.iter().enumerate() {
            let dense = block.to_matrix();
            for i in 0..n {
                for j in 0..n {
                    v[(b * n + i, b * n + j)] = dense[(i, j)];
                }
            }
        }
        match self.form {
            CircuitForm::Lcu => {
                let k = self.k_reflector().unwrap_or_else(|| Matrix::identity(m));
                h_layer.matmul(&v.matmul(&kron_identity(&k, n))?)
            }
            CircuitForm::RowEncoding => v.matmul(&h_layer),
        }
    }
}

/// `a ⊗ I_n`.
fn kron_identity<T: Real>(a: &Matrix<T>, n: usize) -> Matrix<T> {
    Matrix::from_fn(a.rows() * n, a.cols() * n, |r, c| {
        if r % n == c % n {
            a[(r / n, c / n)]
        } else {
            T::zero()
        }
    })
}

/// Free-function form of [`CircuitU::apply`].
pub fn apply_circuit<T: Real>(c: &CircuitU<T>, s: &StateVector<T>) -> Result<StateVector<T>> {
    c.apply(s)
}

/// Free-function form of [`CircuitU::dense_matrix`].
pub fn dense_matrix_of<T: Real>(c: &CircuitU<T>) -> Result<Matrix<T>> {
    c.dense_matrix()
}
