use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Numeric type over which channel polynomials can be evaluated.
///
/// Implemented for `f32`, `f64` and exact rationals.
pub trait Scalar: Clone + Num + FromPrimitive + PartialOrd + Debug {}

impl<T> Scalar for T where T: Clone + Num + FromPrimitive + PartialOrd + Debug {}

/// Floating-point scalars usable by the iterative routines.
pub trait Real: Scalar + Float {}

impl<T> Real for T where T: Scalar + Float {}

pub(crate) fn from_u64<T: Scalar>(v: u64) -> T {
    T::from_u64(v).expect("integer coefficient representable in scalar")
}

pub(crate) fn from_f64<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("finite value representable in scalar")
}
