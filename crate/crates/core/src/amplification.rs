//! Amplitude amplification of the good component of a block-encoding
//! circuit's output.
//!
//! The oblivious iterate does not depend on the system input:
//!
//! ```text
//! Q = -𝒰 S_in 𝒰^{-1} S_good      (adjoint)
//! Q = -𝒰 S_in 𝒰 S_good           (literal)
//! ```
//!
//! where `S_good` negates the good states and `S_in` negates states whose
//! input register is `|0>`. For the row encoding the two reflections act on
//! different registers, and the literal variant re-enters the circuit's
//! input layout by swapping registers before the second `𝒰`.
//!
//! The standard iterate reflects about the actual initial state instead and
//! therefore needs the input preparation operator.

use crate::circuit::{CircuitU, Register, StateVector};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metrics::{fidelity, FidelityMode};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    /// Second `𝒰` applied as is.
    #[default]
    Literal,
    /// Second `𝒰` replaced by its inverse.
    Adjoint,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Literal => "literal",
            Variant::Adjoint => "adjoint",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord<T> {
    /// Number of `Q` applications so far.
    pub iteration: usize,
    pub probability: T,
    pub fidelity: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<T> {
    pub records: Vec<IterationRecord<T>>,
    pub k_target: usize,
    pub variant: Variant,
    /// Largest `| ||state|| - 1 |` seen after any operator application.
    pub norm_drift: T,
}

impl<T: Real> IterationTrace<T> {
    pub fn last(&self) -> &IterationRecord<T> {
        self.records.last().expect("trace holds the initial record")
    }

    /// Highest-probability record among iterations `0..=k` (earliest on
    /// ties).
    pub fn peak_within(&self, k: usize) -> &IterationRecord<T> {
        let mut best = &self.records[0];
        for r in self.records.iter().take(k + 1).skip(1) {
            if r.probability > best.probability {
                best = r;
            }
        }
        best
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,probability,fidelity\n");
        for r in &self.records {
            out.push_str(&format!("{},{:?},{:?}\n", r.iteration, r.probability, r.fidelity));
        }
        out
    }
}

/// `⌊(π/4) sqrt(M)⌋`.
pub fn iteration_count(m: usize) -> usize {
    (std::f64::consts::FRAC_PI_4 * (m as f64).sqrt()).floor() as usize
}

fn check_input<T: Real>(c: &CircuitU<T>, input: &StateVector<T>) -> Result<()> {
    if input.m_dim() != c.m_dim() || input.n_dim() != c.n_dim() {
        return Err(Error::DimensionMismatch(format!(
            "input over {} x {} for a circuit over {} x {}",
            input.m_dim(),
            input.n_dim(),
            c.m_dim(),
            c.n_dim()
        )));
    }
    let norm = input.norm();
    if (norm - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::NotUnitVector { norm: norm.as_f64() });
    }
    debug_assert_eq!(c.input_register(), Register::First);
    if input.amplitudes()[c.n_dim()..].iter().any(|&x| x != T::zero()) {
        return Err(Error::InvalidConfig(
            "input state must have its first register in |0>".into(),
        ));
    }
    Ok(())
}

/// Step-by-step oblivious amplification; holds the current state.
#[derive(Clone, Debug)]
pub struct ObliviousAmplifier<'a, T> {
    circuit: &'a CircuitU<T>,
    state: StateVector<T>,
    variant: Variant,
    iteration: usize,
    norm_drift: T,
}

impl<'a, T: Real> ObliviousAmplifier<'a, T> {
    /// Applies `𝒰` once to `input`, which must be `|0>|in>`.
    pub fn new(circuit: &'a CircuitU<T>, input: &StateVector<T>, variant: Variant) -> Result<Self> {
        check_input(circuit, input)?;
        let state = circuit.apply(input)?;
        let mut amp = ObliviousAmplifier {
            circuit,
            state,
            variant,
            iteration: 0,
            norm_drift: T::zero(),
        };
        amp.track_norm();
        Ok(amp)
    }

    fn track_norm(&mut self) {
        self.norm_drift = self.norm_drift.max((self.state.norm() - T::one()).abs());
    }

    /// One application of `Q`.
    pub fn step(&mut self) -> Result<()> {
        let c = self.circuit;
        c.apply_good_reflection(&mut self.state)?;
        match self.variant {
            Variant::Adjoint => c.apply_inverse_in_place(&mut self.state)?,
            Variant::Literal => {
                c.output_to_input_frame(&mut self.state)?;
                c.apply_in_place(&mut self.state)?;
                c.output_to_input_frame(&mut self.state)?;
            }
        }
        self.track_norm();
        c.apply_input_reflection(&mut self.state)?;
        c.apply_in_place(&mut self.state)?;
        self.state.negate();
        self.track_norm();
        self.iteration += 1;
        Ok(())
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn norm_drift(&self) -> T {
        self.norm_drift
    }

    /// Collapse the current state and compare against `target`.
    pub fn observe(&self, target: &[T], mode: FidelityMode) -> Result<(IterationRecord<T>, Vec<T>)> {
        observe(self.circuit, &self.state, self.iteration, target, mode)
    }
}

fn observe<T: Real>(
    c: &CircuitU<T>,
    state: &StateVector<T>,
    iteration: usize,
    target: &[T],
    mode: FidelityMode,
) -> Result<(IterationRecord<T>, Vec<T>)> {
    let (collapsed, probability) = c.collapse_good(state, mode.projects_system_zero())?;
    let fidelity = fidelity(&collapsed, target)?;
    Ok((
        IterationRecord {
            iteration,
            probability,
            fidelity,
        },
        collapsed,
    ))
}

/// Apply `𝒰` and then `k` oblivious iterations to `input`, recording
/// probability and fidelity against `target` before the first and after
/// every iteration.
pub fn oblivious_aa<T: Real>(
    c: &CircuitU<T>,
    input: &StateVector<T>,
    k: usize,
    variant: Variant,
    target: &[T],
    mode: FidelityMode,
) -> Result<IterationTrace<T>> {
    let mut amp = ObliviousAmplifier::new(c, input, variant)?;
    let mut records = Vec::with_capacity(k + 1);
    records.push(amp.observe(target, mode)?.0);
    for _ in 0..k {
        amp.step()?;
        records.push(amp.observe(target, mode)?.0);
    }
    Ok(IterationTrace {
        records,
        k_target: k,
        variant,
        norm_drift: amp.norm_drift(),
    })
}

/// `x <- (I ⊗ P) x` or `(I ⊗ P^T) x` on the system register.
fn apply_system<T: Real>(prep: &Matrix<T>, s: &mut StateVector<T>, transpose: bool) -> Result<()> {
    let n = s.n_dim();
    for row in s.amplitudes_mut().chunks_exact_mut(n) {
        let y = if transpose {
            prep.mat_t_vec(row)?
        } else {
            prep.mat_vec(row)?
        };
        row.copy_from_slice(&y);
    }
    Ok(())
}

/// Input-dependent amplification with `Q = U_ψ⊥ U_f`, where
/// `U_ψ⊥ = 𝒰 (I⊗P) (2|0><0| - I) (I⊗P)^T 𝒰^{-1}` and `P e0` is the
/// system input.
pub fn standard_aa<T: Real>(
    c: &CircuitU<T>,
    input_prep: &Matrix<T>,
    k: usize,
    target: &[T],
    mode: FidelityMode,
) -> Result<IterationTrace<T>> {
    if input_prep.rows() != c.n_dim() || input_prep.cols() != c.n_dim() {
        return Err(Error::DimensionMismatch(format!(
            "input preparation of shape {}x{} for a system of dimension {}",
            input_prep.rows(),
            input_prep.cols(),
            c.n_dim()
        )));
    }
    input_prep.check_orthogonal(T::tol(1e-10))?;

    let mut drift = T::zero();
    let mut track = |s: &StateVector<T>| drift = drift.max((s.norm() - T::one()).abs());

    let mut state = StateVector::basis(c.m_dim(), c.n_dim(), 0)?;
    apply_system(input_prep, &mut state, false)?;
    c.apply_in_place(&mut state)?;
    track(&state);

    let mut records = Vec::with_capacity(k + 1);
    records.push(observe(c, &state, 0, target, mode)?.0);
    for i in 1..=k {
        c.apply_good_reflection(&mut state)?;
        c.apply_inverse_in_place(&mut state)?;
        apply_system(input_prep, &mut state, true)?;
        let x = state.amplitudes_mut();
        for v in x[1..].iter_mut() {
            *v = -*v;
        }
        apply_system(input_prep, &mut state, false)?;
        c.apply_in_place(&mut state)?;
        track(&state);
        records.push(observe(c, &state, i, target, mode)?.0);
    }
    Ok(IterationTrace {
        records,
        k_target: k,
        variant: Variant::Adjoint,
        norm_drift: drift,
    })
}
