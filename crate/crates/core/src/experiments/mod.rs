//! Random-matrix experiments: ensembles of matrices and inputs, one matrix
//! with many inputs, and per-iteration traces.

mod output;
mod random;

pub use output::{ensemble_csv, ensemble_svg, trace_csv, trace_svg, write_ensemble, write_traces};
pub use random::{random_input, random_symmetric, trial_rng, ExperimentRng, Stream};

use rayon::prelude::*;

use crate::amplification::{iteration_count, oblivious_aa, IterationRecord, IterationTrace, Variant};
use crate::circuit::{build_row_encoding, CircuitU};
use crate::embedding::{closeness, ClosenessReport, Embedding};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::metrics::FidelityMode;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Fresh matrix and input every trial.
    Ensemble,
    /// One matrix per dimension, fresh input every trial.
    FixedMatrix,
    /// Full iteration trace of one case per dimension.
    Trace,
}

/// Which record of a run counts as its result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FinalRule {
    /// Highest success probability among iterations `0..=k`, i.e. stop
    /// amplifying once the probability has peaked.
    #[default]
    Peak,
    /// The record after exactly `k` iterations.
    Last,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// Orders of the embedded `U` (twice the order of the random matrix).
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub variant: Variant,
    pub fidelity_mode: FidelityMode,
    pub experiment: ExperimentKind,
    pub final_rule: FinalRule,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dims: vec![16, 32, 64, 128],
            trials: 100,
            seed: 0,
            variant: Variant::Literal,
            fidelity_mode: FidelityMode::Embedded,
            experiment: ExperimentKind::Ensemble,
            final_rule: FinalRule::Peak,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("no dimensions given".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d < 4 || !d.is_power_of_two()) {
            return Err(Error::InvalidConfig(format!(
                "dimension {d} must be a power of two and at least 4"
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleRecord<T> {
    pub trial: usize,
    pub dim: usize,
    pub c2: T,
    pub ef: T,
    pub final_fidelity: T,
    pub final_probability: T,
    pub k_used: usize,
    /// Iteration the final record was taken from.
    pub final_iteration: usize,
    pub norm_drift: T,
}

/// A matrix embedded and encoded, ready to be run against inputs.
#[derive(Clone, Debug)]
pub struct PreparedCase<T> {
    pub embedding: Embedding<T>,
    pub circuit: CircuitU<T>,
    pub closeness: ClosenessReport<T>,
}

impl<T: Real> PreparedCase<T> {
    /// μ-normalize `a`, build the estimated embedding and its row encoding.
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let embedding = Embedding::estimated(a)?;
        let circuit = build_row_encoding(&embedding.u)?;
        let closeness = closeness(&embedding.u)?;
        Ok(PreparedCase {
            embedding,
            circuit,
            closeness,
        })
    }

    /// Classical reference for a system input `input` (length `d`).
    pub fn target(&self, input: &[T], mode: FidelityMode) -> Result<Vec<T>> {
        match mode {
            FidelityMode::Embedded => self.embedding.u.mat_vec(&self.padded(input)?),
            FidelityMode::Projected => self.embedding.a_normalized.mat_vec(input),
        }
    }

    /// `|0> ⊗ input` inside the order-`2d` system.
    pub fn padded(&self, input: &[T]) -> Result<Vec<T>> {
        let d = self.embedding.block_order();
        if input.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "input of length {} for a {d}x{d} matrix",
                input.len()
            )));
        }
        let mut v = input.to_vec();
        v.resize(self.embedding.u.rows(), T::zero());
        Ok(v)
    }

    pub fn trace(&self, input: &[T], k: usize, variant: Variant, mode: FidelityMode) -> Result<IterationTrace<T>> {
        let target = self.target(input, mode)?;
        let state = self.circuit.prepare_input(&self.padded(input)?)?;
        oblivious_aa(&self.circuit, &state, k, variant, &target, mode)
    }
}

pub(crate) fn select<T: Real>(trace: &IterationTrace<T>, rule: FinalRule) -> IterationRecord<T> {
    match rule {
        FinalRule::Peak => *trace.peak_within(trace.k_target),
        FinalRule::Last => *trace.last(),
    }
}

/// One trial: amplify `input` through `case` for `⌊(π/4)√M⌋` iterations.
pub fn run_case<T: Real>(
    case: &PreparedCase<T>,
    input: &[T],
    trial: usize,
    cfg: &ExperimentConfig,
) -> Result<EnsembleRecord<T>> {
    let dim = case.embedding.u.rows();
    let k = iteration_count(dim);
    let trace = case.trace(input, k, cfg.variant, cfg.fidelity_mode)?;
    let fin = select(&trace, cfg.final_rule);
    Ok(EnsembleRecord {
        trial,
        dim,
        c2: case.closeness.c2,
        ef: case.closeness.ef,
        final_fidelity: fin.fidelity,
        final_probability: fin.probability,
        k_used: k,
        final_iteration: fin.iteration,
        norm_drift: trace.norm_drift,
    })
}

fn draw_case<T: Real>(seed: u64, dim: usize, trial: usize) -> Result<PreparedCase<T>> {
    let a = random_symmetric::<T, _>(dim / 2, &mut trial_rng(seed, dim, trial, Stream::Matrix));
    PreparedCase::new(&a)
}

fn draw_input<T: Real>(seed: u64, dim: usize, trial: usize) -> Result<Vec<T>> {
    random_input(dim / 2, &mut trial_rng(seed, dim, trial, Stream::Input))
}

/// Ensemble or fixed-matrix runs; records ordered by dimension then trial.
pub fn run_ensemble<T: Real>(cfg: &ExperimentConfig) -> Result<Vec<EnsembleRecord<T>>> {
    cfg.validate()?;
    let fixed = match cfg.experiment {
        ExperimentKind::Ensemble => false,
        ExperimentKind::FixedMatrix => true,
        ExperimentKind::Trace => {
            return Err(Error::InvalidConfig("run_ensemble needs an ensemble or fixed-matrix config".into()))
        }
    };
    let mut out = Vec::with_capacity(cfg.dims.len() * cfg.trials);
    for &dim in &cfg.dims {
        let shared = if fixed { Some(draw_case::<T>(cfg.seed, dim, 0)?) } else { None };
        let records = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let owned;
                let case = match &shared {
                    Some(c) => c,
                    None => {
                        owned = draw_case::<T>(cfg.seed, dim, trial)?;
                        &owned
                    }
                };
                run_case(case, &draw_input::<T>(cfg.seed, dim, trial)?, trial, cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(records);
    }
    Ok(out)
}

/// Iterations recorded past `k` in trace runs, to show the decline.
pub const TRACE_OVERSHOOT: usize = 2;

#[derive(Clone, Debug)]
pub struct TraceSeries<T> {
    pub dim: usize,
    pub k_marker: usize,
    pub closeness: ClosenessReport<T>,
    pub trace: IterationTrace<T>,
}

/// One seeded case per dimension, traced through `k + 2` iterations.
pub fn run_trace<T: Real>(cfg: &ExperimentConfig) -> Result<Vec<TraceSeries<T>>> {
    cfg.validate()?;
    cfg.dims
        .par_iter()
        .map(|&dim| {
            let case = draw_case::<T>(cfg.seed, dim, 0)?;
            let input = draw_input::<T>(cfg.seed, dim, 0)?;
            let k = iteration_count(dim);
            let trace = case.trace(&input, k + TRACE_OVERSHOOT, cfg.variant, cfg.fidelity_mode)?;
            Ok(TraceSeries {
                dim,
                k_marker: k,
                closeness: case.closeness,
                trace,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean_fidelity: f64,
    pub mean_probability: f64,
    pub mean_ef: f64,
    /// Share of records with `final_fidelity >= ef`.
    pub above_ef: f64,
    /// `(dim, mean fidelity, mean probability)`
    pub per_dim: Vec<(usize, f64, f64)>,
}

pub fn summarize<T: Real>(records: &[EnsembleRecord<T>]) -> Summary {
    let mean = |f: &dyn Fn(&EnsembleRecord<T>) -> f64, rs: &[&EnsembleRecord<T>]| {
        rs.iter().map(|r| f(r)).sum::<f64>() / rs.len().max(1) as f64
    };
    let all: Vec<_> = records.iter().collect();
    let mut dims: Vec<usize> = records.iter().map(|r| r.dim).collect();
    dims.dedup();
    let per_dim = dims
        .iter()
        .map(|&d| {
            let rs: Vec<_> = records.iter().filter(|r| r.dim == d).collect();
            (d, mean(&|r| r.final_fidelity.as_f64(), &rs), mean(&|r| r.final_probability.as_f64(), &rs))
        })
        .collect();
    Summary {
        count: records.len(),
        mean_fidelity: mean(&|r| r.final_fidelity.as_f64(), &all),
        mean_probability: mean(&|r| r.final_probability.as_f64(), &all),
        mean_ef: mean(&|r| r.ef.as_f64(), &all),
        above_ef: mean(&|r| if r.final_fidelity >= r.ef { 1.0 } else { 0.0 }, &all),
        per_dim,
    }
}
