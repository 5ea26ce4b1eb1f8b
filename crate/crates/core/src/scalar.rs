use std::fmt::{Debug, Display};

use num_traits::Float;

/// Floating-point scalar the rule's math is written against.
///
/// Implemented automatically for every `num_traits::Float` that is also
/// printable and thread-safe, so `f32` and `f64` both qualify.
pub trait Scalar: Float + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal. Exact for `f64`, rounded for narrower types.
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Lossy view used for error messages and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Float + Debug + Display + Send + Sync + 'static {}
