use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::scalar::Real;

/// What a collapsed good vector is compared against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FidelityMode {
    /// The whole good vector against `U |input>`.
    #[default]
    Embedded,
    /// Only the half with the encoded system's leading qubit in `|0>`,
    /// against `A |in>`.
    Projected,
}

impl FidelityMode {
    pub fn projects_system_zero(self) -> bool {
        self == FidelityMode::Projected
    }
}

/// `|<a/|a|, b/|b|>|`.
pub fn fidelity<T: Real>(collapsed: &[T], target: &[T]) -> Result<T> {
    if collapsed.len() != target.len() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between vectors of length {} and {}",
            collapsed.len(),
            target.len()
        )));
    }
    let na = norm2(collapsed);
    let nb = norm2(target);
    if na == T::zero() || nb == T::zero() {
        return Err(Error::ZeroVector);
    }
    // Cauchy-Schwarz; rounding can push the quotient a few ulps above 1.
    Ok((dot(collapsed, target).abs() / (na * nb)).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Reflector;
    use proptest::prelude::*;

    #[test]
    fn basic_values() {
        let v = [0.3f64, -0.4, 1.2];
        assert!((fidelity(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((fidelity(&[1.0, 0.0], &[h, h]).unwrap() - h).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(matches!(fidelity(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroVector)));
        assert!(fidelity(&[1.0], &[1.0, 0.0]).is_err());
    }

    fn nonzero_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.0f64..1.0, n).prop_filter("nonzero", |v| norm2(v) > 1e-3)
    }

    proptest! {
        #[test]
        fn scale_invariant(u in nonzero_vec(5), c in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]) {
            let scaled: Vec<f64> = u.iter().map(|x| c * x).collect();
            prop_assert!((fidelity(&u, &scaled).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn symmetric_and_bounded(a in nonzero_vec(6), b in nonzero_vec(6)) {
            let f = fidelity(&a, &b).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
            prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-15);
        }

        #[test]
        fn orthogonal_invariance(a in nonzero_vec(4), b in nonzero_vec(4), r in nonzero_vec(4)) {
            let u: Vec<f64> = r.iter().map(|x| x / norm2(&r)).collect();
            let refl = Reflector::from_unit_vector(&u).unwrap();
            let (mut ra, mut rb) = (a.clone(), b.clone());
            refl.apply(&mut ra);
            refl.apply(&mut rb);
            prop_assert!((fidelity(&a, &b).unwrap() - fidelity(&ra, &rb).unwrap()).abs() < 1e-12);
        }
    }
}
