//! The real scalar type every construction is generic over.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar (`f32` or `f64`) underlying the complex matrices.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Every supported scalar represents all finite
    /// `f64` values up to rounding, so this never fails for finite input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Threshold that is at least `value` and never below a few ulps of the type.
    fn floor_tol(value: f64, ulps: f64) -> Self {
        let eps = Self::epsilon().as_f64();
        Self::lit(value.max(eps * ulps))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
