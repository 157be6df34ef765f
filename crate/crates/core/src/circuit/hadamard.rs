use crate::scalar::Real;

/// `(H^{⊗m} ⊗ I) x` for a row-major `m_dim x width` array, where `m_dim` is
/// a power of two. In-place radix-2 butterflies, then a single `1/sqrt(M)`
/// scale.
pub fn fwht_first_register<T: Real>(x: &mut [T], m_dim: usize, width: usize) {
    debug_assert!(m_dim.is_power_of_two());
    debug_assert_eq!(x.len(), m_dim * width);
    let mut h = 1;
    while h < m_dim {
        for base in (0..m_dim).step_by(2 * h) {
            for a in base..base + h {
                let (lo, hi) = x.split_at_mut((a + h) * width);
                let top = &mut lo[a * width..(a + 1) * width];
                let bottom = &mut hi[..width];
                for (t, b) in top.iter_mut().zip(bottom.iter_mut()) {
                    let (p, q) = (*t, *b);
                    *t = p + q;
                    *b = p - q;
                }
            }
        }
        h *= 2;
    }
    let scale = T::one() / T::from_usize(m_dim).expect("dimension fits").sqrt();
    for v in x.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_hadamard(m: usize) -> Vec<Vec<f64>> {
        let s = 1.0 / (m as f64).sqrt();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if (i & j).count_ones() % 2 == 0 { s } else { -s })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn matches_dense_sylvester_matrix() {
        for m in [1usize, 2, 4, 8, 16] {
            let width = 3;
            let x: Vec<f64> = (0..m * width).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
            let mut y = x.clone();
            fwht_first_register(&mut y, m, width);
            let h = dense_hadamard(m);
            for a in 0..m {
                for s in 0..width {
                    let want: f64 = (0..m).map(|b| h[a][b] * x[b * width + s]).sum();
                    assert!((y[a * width + s] - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn is_an_involution() {
        let x: Vec<f64> = (0..32).map(|i| (i as f64).sin()).collect();
        let mut y = x.clone();
        fwht_first_register(&mut y, 8, 4);
        fwht_first_register(&mut y, 8, 4);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
