//! Scalar abstraction. Every solver in this crate is generic over the
//! floating-point type through [`Real`]; `f32` and `f64` are the two
//! supported instantiations.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Wraps an angle to the half-open interval `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(angle: T) -> T {
    let tau = T::TAU();
    let wrapped = angle % tau;
    if wrapped < T::zero() {
        wrapped + tau
    } else {
        wrapped
    }
}

/// Wraps an angle difference to `(-π, π]`.
pub fn wrap_pi<T: Real>(angle: T) -> T {
    let tau = T::TAU();
    let mut wrapped = angle % tau;
    if wrapped <= -T::PI() {
        wrapped += tau;
    } else if wrapped > T::PI() {
        wrapped -= tau;
    }
    wrapped
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_two_pi_range() {
        for &x in &[-7.0f64, -3.2, 0.0, 1.0, 6.2831853, 12.0] {
            let w = wrap_two_pi(x);
            assert!((0.0..std::f64::consts::TAU).contains(&w), "{x} -> {w}");
        }
    }

    #[test]
    fn wrap_pi_range() {
        for &x in &[-9.0f64, -3.15, 0.0, 3.15, 9.0] {
            let w = wrap_pi(x);
            assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        }
    }

    #[test]
    fn f32_literals() {
        assert_eq!(f32::lit(0.5), 0.5f32);
    }
}
