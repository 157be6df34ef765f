//! Seeded random matrices and inputs.
//!
//! All draws come from ChaCha8 streams. Each `(seed, dim, trial, stream)`
//! tuple gets its own generator so trials can run in any order or in
//! parallel and still produce the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{norm2, Matrix};
use crate::scalar::Real;

pub type ExperimentRng = ChaCha8Rng;

/// Independent streams under one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Matrix = 1,
    Input = 2,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, dim: usize, trial: usize, stream: Stream) -> ExperimentRng {
    let mut h = mix(seed);
    for part in [dim as u64, trial as u64, stream as u64] {
        h = mix(h ^ part);
    }
    ExperimentRng::seed_from_u64(h)
}

/// Symmetric `d x d` matrix; the upper triangle and diagonal are independent
/// uniform draws from `[-1, 1]`, filled row by row and mirrored.
pub fn random_symmetric<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix<T> {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let x = T::lit(rng.random_range(-1.0..=1.0));
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Unit vector from uniform `[-1, 1]` draws.
pub fn random_input<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Vec<T>> {
    if d == 0 {
        return Err(Error::DimensionMismatch("input dimension must be positive".into()));
    }
    for _ in 0..2 {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n = norm2(&v);
        if n > 0.0 {
            return Ok(v.iter().map(|x| T::lit(x / n)).collect());
        }
    }
    Err(Error::ZeroVector)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a: Matrix<f64> = random_symmetric(6, &mut trial_rng(7, 16, 0, Stream::Matrix));
        let b: Matrix<f64> = random_symmetric(6, &mut trial_rng(7, 16, 0, Stream::Matrix));
        assert_eq!(a, b);
        let c: Matrix<f64> = random_symmetric(6, &mut trial_rng(7, 16, 1, Stream::Matrix));
        assert_ne!(a, c);
    }

    #[test]
    fn exactly_symmetric_and_bounded() {
        let mut rng = trial_rng(1, 0, 0, Stream::Matrix);
        let a: Matrix<f64> = random_symmetric(100, &mut rng);
        assert_eq!(a, a.transpose());
        assert!(a.as_slice().iter().all(|x| (-1.0..=1.0).contains(x)));
        assert_eq!(a.as_slice().len(), 10_000);
    }

    #[test]
    fn inputs_are_unit_and_reproducible() {
        let v: Vec<f64> = random_input(9, &mut trial_rng(3, 0, 0, Stream::Input)).unwrap();
        assert!((norm2(&v) - 1.0).abs() < 1e-14);
        let w: Vec<f64> = random_input(9, &mut trial_rng(3, 0, 0, Stream::Input)).unwrap();
        assert_eq!(v, w);
        let one: Vec<f64> = random_input(1, &mut trial_rng(3, 0, 0, Stream::Input)).unwrap();
        assert_eq!(one[0].abs(), 1.0);
    }

    #[test]
    fn streams_are_distinct() {
        let mut a = trial_rng(5, 32, 2, Stream::Matrix);
        let mut b = trial_rng(5, 32, 2, Stream::Input);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
    }
}
