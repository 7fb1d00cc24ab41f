//! Scalar abstraction: every numeric routine in this crate is generic over
//! [`Real`], satisfied by `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable by all matrix and solver code.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum<Self>
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into the scalar type.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite literals this crate uses.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("finite f64 constant must convert to the scalar type")
}

/// Kahan-compensated sum. The objective-trace monotonicity contract allows
/// only 1e-10 absolute slack, which naive summation over a few thousand
/// entries does not reliably meet.
pub fn compensated_sum<F: Real, I: IntoIterator<Item = F>>(values: I) -> F {
    let mut sum = F::zero();
    let mut carry = F::zero();
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}
