//! Floating-point bound shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::ScalarOperand;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar usable throughout the analysis (`f32` or `f64`).
pub trait Scalar:
    Float + NumAssign + FromPrimitive + ToPrimitive + ScalarOperand + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; never fails for the supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute tolerance on probability sums: `1e-12`, widened for low precision types.
    fn weight_tolerance() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Tolerance on bin contiguity checks (`c_l + r_l <= c_{l+1} - r_{l+1} + tol`).
    fn contiguity_tolerance() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(1024.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
