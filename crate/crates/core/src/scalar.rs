//! Scalar abstractions.
//!
//! The polyhedral side is generic over an exact integer type (`BigInt` by
//! default, `i64` for small fast inputs); rationals are `Ratio<I>`. The
//! numerical side is generic over a float type (`f64` by default).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable for lattice arithmetic.
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer type cannot represent value")
    }
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + Send
        + Sync
        + 'static
{
}

/// Exact rational over `I`.
pub type Rational<I> = Ratio<I>;

/// Floating-point scalar for the numerical lab: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("float literal")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
}

/// Converts an exact integer to a float, rounding once.
pub fn int_to_real<I: ExactInt, F: Real>(v: &I) -> F {
    match v.to_f64() {
        Some(f) => F::lit(f),
        None => {
            let b: BigInt = v.to_bigint().expect("integer converts to BigInt");
            F::lit(b.to_f64().unwrap_or(f64::NAN))
        }
    }
}

/// Converts an exact rational to a float, rounding once.
pub fn ratio_to_real<I: ExactInt, F: Real>(v: &Ratio<I>) -> F {
    let big = Ratio::new(
        v.numer().to_bigint().expect("numerator"),
        v.denom().to_bigint().expect("denominator"),
    );
    F::lit(big.to_f64().unwrap_or(f64::NAN))
}
