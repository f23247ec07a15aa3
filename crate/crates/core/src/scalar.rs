//! Scalar abstraction.
//!
//! Every numerical routine in this crate is generic over [`Real`], the real
//! field underlying the complex entries. `f64` is the working precision used
//! by the verification suites; `f32` is supported with correspondingly looser
//! tolerances.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

use crate::backend::Backend;

/// Real scalar type underlying a [`crate::ComplexMatrix`].
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static + Backend
{
    /// Lossy conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
