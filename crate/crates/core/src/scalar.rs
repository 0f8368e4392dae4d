//! Real scalar abstraction used by the dense complex kernel.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the linear-algebra kernel is generic over.
///
/// The associated tolerances are the defaults used by operations that take
/// no explicit tolerance. They are tuned for `f64`; the `f32` values are
/// scaled to single-precision headroom.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default Frobenius tolerance for Hermiticity checks.
    fn hermiticity_tol() -> Self;
    /// Default clamp tolerance for slightly negative eigenvalues.
    fn clamp_tol() -> Self;
    /// Largest condition number accepted for inversion and polar factors.
    fn cond_threshold() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in the scalar type")
    }
}

impl Real for f64 {
    fn hermiticity_tol() -> Self {
        1e-10
    }
    fn clamp_tol() -> Self {
        1e-12
    }
    fn cond_threshold() -> Self {
        1e12
    }
}

impl Real for f32 {
    fn hermiticity_tol() -> Self {
        1e-4
    }
    fn clamp_tol() -> Self {
        1e-5
    }
    fn cond_threshold() -> Self {
        1e5
    }
}
