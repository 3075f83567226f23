//! Scalar abstraction shared by the analytic modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating point type the analytic code is generic over (`f32` or `f64`).
///
/// Tolerances quoted throughout the crate are stated for `f64`; with `f32`
/// the same code runs but the residual guarantees scale with `epsilon()`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(1 + t) - t`, accurate for small `|t|`.
pub fn log1p_minus_id<T: Real>(t: T) -> T {
    if t.abs() < T::lit(1e-2) {
        // alternating series -t^2/2 + t^3/3 - ...
        let mut term = t * t;
        let mut sum = T::zero();
        let mut sign = -T::one();
        for k in 2..40 {
            let add = sign * term / T::from_i32(k).unwrap();
            sum = sum + add;
            if add.abs() <= T::epsilon() * sum.abs() {
                break;
            }
            term = term * t;
            sign = -sign;
        }
        sum
    } else {
        t.ln_1p() - t
    }
}

/// `(t - ln(1 + t)) / t^2`, continuous at `t = 0` with value `1/2`.
pub fn log1p_quotient<T: Real>(t: T) -> T {
    if t.abs() < T::lit(1e-2) {
        // 1/2 - t/3 + t^2/4 - ...
        let mut sum = T::zero();
        let mut pow = T::one();
        let mut sign = T::one();
        for k in 2..40 {
            let add = sign * pow / T::from_i32(k).unwrap();
            sum = sum + add;
            if add.abs() <= T::epsilon() * sum.abs() {
                break;
            }
            pow = pow * t;
            sign = -sign;
        }
        sum
    } else {
        -log1p_minus_id(t) / (t * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_direct_evaluation() {
        for &t in &[-0.5f64, -0.02, 0.02, 0.3, 2.0] {
            assert!((log1p_minus_id(t) - (t.ln_1p() - t)).abs() < 1e-15);
        }
        for &t in &[-9e-3f64, -1e-5, 1e-7, 9e-3] {
            // the direct form loses about eps·|t| to cancellation
            let direct = t.ln_1p() - t;
            assert!((log1p_minus_id(t) - direct).abs() <= 4.0 * f64::EPSILON * t.abs());
        }
        assert_eq!(log1p_quotient(0.0f64), 0.5);
        let t = 9.9e-3f64;
        assert!((log1p_quotient(t) - (t - t.ln_1p()) / (t * t)).abs() < 1e-9);
    }

    #[test]
    fn works_for_f32() {
        let v: f32 = log1p_quotient(1e-3f32);
        assert!((v - 0.49967).abs() < 1e-4);
    }
}
