//! Scalar abstraction: f32 or f64.

use num_traits::{Float, FromPrimitive};

/// Floating point scalar the whole crate is generic over.
///
/// Everything here is plain real arithmetic, so `f32` works, but the
/// convergence tables in the docs assume `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    fn pi() -> Self {
        Self::from_f64(std::f64::consts::PI).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for pulling an `f64` literal into the generic scalar type.
#[inline]
pub fn fl<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

/// Usize -> scalar, total for the index ranges used here.
#[inline]
pub fn us<T: Real>(n: usize) -> T {
    T::from_usize(n).unwrap()
}
