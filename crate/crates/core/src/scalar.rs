//! Floating point abstraction shared by every physics routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the library computes with: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Exact for integers below the mantissa width of `Self`.
    fn from_int(v: u64) -> Self {
        Self::from_u64(v).expect("integer representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Unit round-off of the type.
    fn eps() -> Self {
        Self::epsilon()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Fractional part in `[0, 1)`.
pub(crate) fn frac<S: Scalar>(x: S) -> S {
    let f = x - x.floor();
    if f >= S::one() {
        S::zero()
    } else {
        f
    }
}

/// `(cos, sin)` of `2π · frac(k · cycles)` for an integer multiplier `k`.
///
/// `cycles` should already be reduced to `[0, 1)` so that the product stays
/// small. Quarter turns come out exact, so odd harmonics vanish identically
/// at `t = T/4`.
pub(crate) fn turn_cos_sin<S: Scalar>(k: u64, cycles: S) -> (S, S) {
    let f = frac(S::from_int(k) * cycles);
    let q = f * S::lit(4.0);
    if q == q.floor() {
        return match q.to_u8() {
            Some(0) => (S::one(), S::zero()),
            Some(1) => (S::zero(), S::one()),
            Some(2) => (-S::one(), S::zero()),
            _ => (S::zero(), -S::one()),
        };
    }
    let angle = S::TAU() * f;
    (angle.cos(), angle.sin())
}

pub(crate) fn turn_cos<S: Scalar>(k: u64, cycles: S) -> S {
    turn_cos_sin(k, cycles).0
}

pub(crate) fn turn_sin<S: Scalar>(k: u64, cycles: S) -> S {
    turn_cos_sin(k, cycles).1
}
