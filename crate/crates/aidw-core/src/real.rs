//! Scalar abstraction over the two supported precisions.

use core::fmt::{Debug, Display};
use core::str::FromStr;

use num_traits::float::{Float, FloatConst};
use num_traits::FromPrimitive;

/// Floating-point scalar the kernels are generic over.
///
/// Implemented for `f32` (single precision) and `f64` (double precision).
/// With the default `std` feature the math functions come from the
/// platform libm; in `no_std` builds they come from the `libm` crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + FromStr + Display + Debug + Send + Sync + 'static
{
    /// Default coincidence tolerance: query-to-sample distances below this
    /// short-circuit the weighted average, since `1/d^alpha` diverges.
    fn default_zero_tol() -> Self;

    /// Raw bit pattern widened to `u64`, for bit-exact comparisons.
    fn to_bits_u64(self) -> u64;
}

impl Real for f32 {
    #[inline]
    fn default_zero_tol() -> Self {
        1e-6
    }

    #[inline]
    fn to_bits_u64(self) -> u64 {
        u64::from(self.to_bits())
    }
}

impl Real for f64 {
    #[inline]
    fn default_zero_tol() -> Self {
        1e-12
    }

    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }
}

/// Converts an `f64` constant to `R`. Only used with exact small literals.
#[inline]
pub(crate) fn c<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("constant out of range")
}
