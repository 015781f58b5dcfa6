use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the chain arithmetic runs in.
///
/// The tolerances scale with the precision of the type: `f64` uses the
/// 1e-9 row-sum tolerance throughout, `f32` a correspondingly looser one.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Largest accepted deviation of a row (or distribution) total from one.
    fn sum_tolerance() -> Self;

    /// Largest accepted 1-norm condition estimate of `I - Q` in absorbing analysis.
    fn max_condition() -> Self;

    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn sum_tolerance() -> Self {
        1e-9
    }

    fn max_condition() -> Self {
        1e12
    }
}

impl Scalar for f32 {
    fn sum_tolerance() -> Self {
        1e-5
    }

    fn max_condition() -> Self {
        1e6
    }
}
