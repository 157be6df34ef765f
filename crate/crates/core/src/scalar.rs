use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar the numerical core is generic over.
///
/// Tolerances throughout the crate are written for 64-bit arithmetic.
/// [`Real::tol`] maps such a tolerance onto the precision of `Self` by the
/// ratio of machine epsilons, so the same thresholds stay meaningful for
/// `f32`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Scale a tolerance expressed for `f64` to this type's precision.
    fn tol(tol_f64: f64) -> Self;

    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn tol(tol_f64: f64) -> Self {
        tol_f64
    }
}

impl Real for f32 {
    #[inline]
    fn tol(tol_f64: f64) -> Self {
        (tol_f64 * (f32::EPSILON as f64 / f64::EPSILON)) as f32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_tolerance_is_identity() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
    }

    #[test]
    fn f32_tolerance_scales_with_epsilon() {
        let t = <f32 as Real>::tol(1e-12);
        assert!(t > 1e-4 && t < 1e-3, "{t}");
    }
}
