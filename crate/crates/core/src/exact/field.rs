use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::{ExactError, Rational};

/// Exact field elements usable by the generic linear algebra and series code.
///
/// Constants returned by [`Field::zero`], [`Field::one`] and
/// [`Field::from_rational`] must combine with any other element of the type.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, ExactError>;
    fn from_rational(q: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}
