//! Floating-point scalar abstraction shared by the geometric and statistical code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real-valued scalar used for areas, distances, moments and accuracies.
///
/// Implemented for `f32` and `f64`; the crate-root aliases fix it to `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless for every integer the feature pipeline produces with `f64`.
    fn of_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer representable as float")
    }

    fn of_usize(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("integer representable as float")
    }

    fn hundred() -> Self {
        Self::of_usize(100)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
