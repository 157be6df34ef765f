use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::scalar::Real;

/// Which factor of the two-register tensor space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Register {
    First,
    Second,
}

/// Real amplitudes over `M x N` basis states; `(a, s)` is stored at
/// `a * N + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<T>,
    m_dim: usize,
    n_dim: usize,
}

impl<T: Real> StateVector<T> {
    pub fn new(m_dim: usize, n_dim: usize, amplitudes: Vec<T>) -> Result<Self> {
        if m_dim == 0 || n_dim == 0 || amplitudes.len() != m_dim * n_dim {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for registers {m_dim} x {n_dim}",
                amplitudes.len()
            )));
        }
        Ok(StateVector {
            amplitudes,
            m_dim,
            n_dim,
        })
    }

    /// `|0>|system>`: first register in `|0>`, second register holding
    /// `system` (length `n_dim`).
    pub fn with_first_zero(m_dim: usize, system: &[T]) -> Result<Self> {
        let n_dim = system.len();
        let mut amps = vec![T::zero(); m_dim * n_dim];
        amps[..n_dim].copy_from_slice(system);
        Self::new(m_dim, n_dim, amps)
    }

    pub fn basis(m_dim: usize, n_dim: usize, index: usize) -> Result<Self> {
        let mut amps = vec![T::zero(); m_dim * n_dim];
        *amps.get_mut(index).ok_or_else(|| {
            Error::DimensionMismatch(format!("basis index {index} out of range"))
        })? = T::one();
        Self::new(m_dim, n_dim, amps)
    }

    #[inline]
    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    #[inline]
    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [T] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<T> {
        self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, a: usize, s: usize) -> T {
        self.amplitudes[a * self.n_dim + s]
    }

    pub fn norm(&self) -> T {
        norm2(&self.amplitudes)
    }

    /// Flat indices of basis states whose `register` component is 0.
    pub fn zero_indices(&self, register: Register) -> impl Iterator<Item = usize> + '_ {
        let (count, stride) = match register {
            Register::First => (self.n_dim, 1),
            Register::Second => (self.m_dim, self.n_dim),
        };
        (0..count).map(move |i| i * stride)
    }

    /// Negate every amplitude whose `register` component is 0.
    pub fn reflect_zero(&mut self, register: Register) {
        match register {
            Register::First => {
                for x in &mut self.amplitudes[..self.n_dim] {
                    *x = -*x;
                }
            }
            Register::Second => {
                for x in self.amplitudes.iter_mut().step_by(self.n_dim) {
                    *x = -*x;
                }
            }
        }
    }

    /// Exchange the two registers (`(a, s) -> (s, a)`).
    pub fn swap_registers(&mut self) {
        let (m, n) = (self.m_dim, self.n_dim);
        if m == n {
            for a in 0..m {
                for s in (a + 1)..n {
                    self.amplitudes.swap(a * n + s, s * n + a);
                }
            }
        } else {
            let mut out = vec![T::zero(); m * n];
            for a in 0..m {
                for s in 0..n {
                    out[s * m + a] = self.amplitudes[a * n + s];
                }
            }
            self.amplitudes = out;
            self.m_dim = n;
            self.n_dim = m;
        }
    }

    pub fn negate(&mut self) {
        for x in &mut self.amplitudes {
            *x = -*x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_first_register() {
        let mut s = StateVector::<f64>::basis(4, 4, 3).unwrap();
        s.reflect_zero(Register::First);
        assert_eq!(s.amplitude(0, 3), -1.0);
        let mut s = StateVector::<f64>::basis(4, 4, 4).unwrap();
        s.reflect_zero(Register::First);
        assert_eq!(s.amplitude(1, 0), 1.0);
    }

    #[test]
    fn reflect_second_register_on_uniform_state() {
        let mut s = StateVector::new(4, 2, vec![1.0f64; 8]).unwrap();
        s.reflect_zero(Register::Second);
        let flipped: Vec<usize> = (0..8).filter(|&i| s.amplitudes()[i] < 0.0).collect();
        assert_eq!(flipped, vec![0, 2, 4, 6]);

        // two ancilla states over a 4-dimensional system
        let mut s = StateVector::new(2, 4, vec![1.0f64; 8]).unwrap();
        s.reflect_zero(Register::Second);
        let flipped: Vec<usize> = (0..8).filter(|&i| s.amplitudes()[i] < 0.0).collect();
        assert_eq!(flipped, vec![0, 4]);
    }

    #[test]
    fn swap_registers_transposes() {
        let mut s = StateVector::new(2, 3, (0..6).map(f64::from).collect()).unwrap();
        s.swap_registers();
        assert_eq!((s.m_dim(), s.n_dim()), (3, 2));
        assert_eq!(s.amplitudes(), &[0.0, 3.0, 1.0, 4.0, 2.0, 5.0]);
        let mut q = StateVector::new(2, 2, vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        q.swap_registers();
        assert_eq!(q.amplitudes(), &[1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn zero_indices_by_register() {
        let s = StateVector::<f64>::basis(4, 3, 0).unwrap();
        assert_eq!(s.zero_indices(Register::First).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(s.zero_indices(Register::Second).collect::<Vec<_>>(), vec![0, 3, 6, 9]);
    }
}
