//! Scalar abstraction shared by every numerical module.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point type the laboratory is generic over (`f32` or `f64`).
///
/// All tolerances quoted in the documentation assume `f64`; `f32` runs are
/// supported for throughput experiments but will not meet them.
pub trait Real:
    Float + FloatConst + FftNum + FromPrimitive + ToPrimitive + Display + Debug + Default + Sum
{
    /// Converts an `f64` constant into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FftNum + FromPrimitive + ToPrimitive + Display + Debug + Default + Sum
{
}
