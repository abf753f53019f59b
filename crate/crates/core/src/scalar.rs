//! Floating-point scalar abstraction.
//!
//! Every estimator, comparator and closed form in this crate is written
//! against [`Scalar`] so callers can run in `f32` or `f64`. The crate root
//! re-exports `f64` aliases for the common case.

use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real number type usable by the estimators: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal or intermediate into `Self`.
    ///
    /// Narrowing to `f32` rounds; it never fails for finite input.
    fn lit(value: f64) -> Self;

    /// Converts a count into `Self`.
    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// Widens to `f64` for RNG-driven code and reporting.
    fn as_f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn lit(value: f64) -> Self {
        value as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(value: f64) -> Self {
        value
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

/// 1/sqrt(2π).
pub(crate) fn inv_sqrt_two_pi<T: Scalar>() -> T {
    T::lit(0.398_942_280_401_432_7)
}
