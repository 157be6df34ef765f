//! Matrix functions as truncated products of symmetric factors, executed
//! as a chain of amplified block-encoding circuits.
//!
//! `exp(A) ≈ (I + A/k)^k` and
//! `cos(πA) ≈ Π_{j=0}^{J-1} (I - 2A/(2j+1)) (I + 2A/(2j+1))`.

use crate::amplification::{iteration_count, ObliviousAmplifier, Variant};
use crate::error::{Error, Result};
use crate::experiments::{FinalRule, PreparedCase};
use crate::linalg::{norm2, sym_eigen, Matrix};
use crate::metrics::{fidelity, FidelityMode};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFunction {
    Exp,
    Cos,
    Custom,
}

#[derive(Clone, Debug)]
pub struct ProductPlan<T> {
    /// Applied in order: `factors[0]` acts first.
    pub factors: Vec<Matrix<T>>,
    pub function: MatrixFunction,
    pub truncation: usize,
    /// Classical `f(A)` when the plan approximates a named function.
    pub target_oracle: Option<Matrix<T>>,
}

impl<T: Real> ProductPlan<T> {
    pub fn custom(factors: Vec<Matrix<T>>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidConfig("a product needs at least one factor".into()))?;
        for f in &factors {
            f.check_symmetric()?;
            if f.rows() != first.rows() {
                return Err(Error::DimensionMismatch("factors of different orders".into()));
            }
        }
        Ok(ProductPlan {
            truncation: factors.len(),
            factors,
            function: MatrixFunction::Custom,
            target_oracle: None,
        })
    }

    pub fn order(&self) -> usize {
        self.factors[0].rows()
    }

    /// `W_{r-1} ⋯ W_1 W_0`.
    pub fn classical_product(&self) -> Matrix<T> {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = f.matmul(&acc).expect("factors share one order");
        }
        acc
    }
}

/// `Q f(Λ) Q^T` for `f` = exp or `cos(π·)`.
pub fn matrix_function_oracle<T: Real>(a: &Matrix<T>, function: MatrixFunction) -> Result<Matrix<T>> {
    let eig = sym_eigen(a)?;
    match function {
        MatrixFunction::Exp => Ok(eig.map_spectrum(T::exp)),
        MatrixFunction::Cos => Ok(eig.map_spectrum(|l| (T::lit(std::f64::consts::PI) * l).cos())),
        MatrixFunction::Custom => Err(Error::InvalidConfig("no oracle for a custom product".into())),
    }
}

/// `k` copies of `I + A/k`.
pub fn exp_product_factors<T: Real>(a: &Matrix<T>, k: usize) -> Result<ProductPlan<T>> {
    if k == 0 {
        return Err(Error::InvalidConfig("truncation must be at least 1".into()));
    }
    let oracle = matrix_function_oracle(a, MatrixFunction::Exp)?;
    let kf = T::from_usize(k).expect("truncation fits");
    let w = Matrix::identity(a.rows()).add(&a.scale(T::one() / kf))?;
    Ok(ProductPlan {
        factors: vec![w; k],
        function: MatrixFunction::Exp,
        truncation: k,
        target_oracle: Some(oracle),
    })
}

/// `I - 2A/(2j+1)` and `I + 2A/(2j+1)` for `j = 0 … J-1`.
pub fn cos_product_factors<T: Real>(a: &Matrix<T>, j_max: usize) -> Result<ProductPlan<T>> {
    if j_max == 0 {
        return Err(Error::InvalidConfig("truncation must be at least 1".into()));
    }
    let oracle = matrix_function_oracle(a, MatrixFunction::Cos)?;
    let id = Matrix::identity(a.rows());
    let mut factors = Vec::with_capacity(2 * j_max);
    for j in 0..j_max {
        let c = T::lit(2.0) / T::from_usize(2 * j + 1).expect("index fits");
        let step = a.scale(c);
        factors.push(id.sub(&step)?);
        factors.push(id.add(&step)?);
    }
    Ok(ProductPlan {
        factors,
        function: MatrixFunction::Cos,
        truncation: j_max,
        target_oracle: Some(oracle),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageRecord<T> {
    pub stage: usize,
    /// Amplified good-state probability at the selected iteration.
    pub probability: T,
    /// Fidelity of the stage output against `(W_j / mu_j) x_j`.
    pub fidelity: T,
    pub mu_scale: T,
    pub iteration: usize,
}

#[derive(Clone, Debug)]
pub struct ChainedResult<T> {
    /// Unit-norm output direction.
    pub collapsed: Vec<T>,
    pub stages: Vec<StageRecord<T>>,
}

impl<T: Real> ChainedResult<T> {
    /// Product of the per-factor normalizations.
    pub fn total_scale(&self) -> T {
        self.stages.iter().fold(T::one(), |acc, s| acc * s.mu_scale)
    }

    pub fn fidelity_against(&self, target: &[T]) -> Result<T> {
        fidelity(&self.collapsed, target)
    }

    pub fn stages_csv(&self) -> String {
        let mut out = String::from("stage,probability,fidelity,mu_scale\n");
        for s in &self.stages {
            out.push_str(&format!("{},{:?},{:?},{:?}\n", s.stage, s.probability, s.fidelity, s.mu_scale));
        }
        out
    }
}

/// Run every factor through its own embedded, amplified circuit, feeding
/// each stage's collapsed output to the next stage as its input.
///
/// Each factor must have power-of-two order. Per stage, the state at the
/// iteration chosen by `rule` (within `0..=⌊(π/4)√M⌋`) is collapsed onto
/// the good states with the encoded system's leading qubit in `|0>`.
pub fn chained_product_circuit<T: Real>(
    plan: &ProductPlan<T>,
    input: &[T],
    variant: Variant,
    rule: FinalRule,
) -> Result<ChainedResult<T>> {
    let d = plan.order();
    if input.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "input of length {} for factors of order {d}",
            input.len()
        )));
    }
    let norm = norm2(input);
    if (norm - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::NotUnitVector { norm: norm.as_f64() });
    }

    let mut x = input.to_vec();
    let mut stages = Vec::with_capacity(plan.factors.len());
    for (stage, w) in plan.factors.iter().enumerate() {
        let case = PreparedCase::new(w)?;
        let target = case.target(&x, FidelityMode::Projected)?;
        let k = iteration_count(case.circuit.m_dim());
        let state = case.circuit.prepare_input(&case.padded(&x)?)?;
        let mut amp = ObliviousAmplifier::new(&case.circuit, &state, variant)?;

        let mut best: Option<(StageRecord<T>, Vec<T>)> = None;
        loop {
            let (_, probability) = case.circuit.collapse_good(amp.state(), false)?;
            let take = match (rule, &best) {
                (_, None) => true,
                (FinalRule::Peak, Some((b, _))) => probability > b.probability,
                (FinalRule::Last, Some(_)) => true,
            };
            if take {
                let (half, _) = case.circuit.collapse_good(amp.state(), true)?;
                let record = StageRecord {
                    stage,
                    probability,
                    fidelity: fidelity(&half, &target)?,
                    mu_scale: case.embedding.mu,
                    iteration: amp.iteration(),
                };
                best = Some((record, half));
            }
            if amp.iteration() == k {
                break;
            }
            amp.step()?;
        }
        let (record, half) = best.expect("at least the initial record");
        stages.push(record);
        x = half;
    }
    Ok(ChainedResult { collapsed: x, stages })
}
