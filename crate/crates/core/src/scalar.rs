//! Exact scalar abstraction.
//!
//! Every coordinate, offset and volume in the crate is a [`Scalar`]. The trait
//! is implemented for exact rational types only: the twin relation
//! `|t_i - t'_i| = 1` and the half-open boundary tests must be decided without
//! rounding, so there is no floating-point implementation.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact ordered field element usable as a coordinate.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Largest integer not exceeding `self`.
    fn floor(&self) -> Self;

    fn is_integer(&self) -> bool;

    /// The value as an `i64` when it is an integer that fits.
    fn to_i64_exact(&self) -> Option<i64>;

    /// Approximate value, for rendering only.
    fn to_f64_lossy(&self) -> f64;

    /// Parse the canonical `p/q` (or `p`) form. Zero denominators are rejected.
    fn parse_exact(text: &str) -> Option<Self>;

    /// `numer / denom`; panics if `denom == 0`.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::ratio(value, 1)
    }

    fn frac_part(&self) -> Self {
        self.clone() - self.floor()
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// Least non-negative residue modulo `modulus` (which must be positive).
    fn rem_euclid(&self, modulus: &Self) -> Self {
        let q = (self.clone() / modulus.clone()).floor();
        self.clone() - q * modulus.clone()
    }
}

macro_rules! impl_ratio_scalar {
    ($int:ty, $from:expr) => {
        impl Scalar for Ratio<$int> {
            fn floor(&self) -> Self {
                Ratio::floor(self)
            }

            fn is_integer(&self) -> bool {
                Ratio::is_integer(self)
            }

            fn to_i64_exact(&self) -> Option<i64> {
                if Ratio::is_integer(self) {
                    self.numer().to_i64()
                } else {
                    None
                }
            }

            fn to_f64_lossy(&self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }

            fn parse_exact(text: &str) -> Option<Self> {
                let text = text.trim();
                if text.is_empty() || text.contains(char::is_whitespace) {
                    return None;
                }
                Ratio::<$int>::from_str(text).ok()
            }

            fn ratio(numer: i64, denom: i64) -> Self {
                let from: fn(i64) -> $int = $from;
                Ratio::new(from(numer), from(denom))
            }
        }
    };
}

impl_ratio_scalar!(BigInt, BigInt::from);
impl_ratio_scalar!(i64, |v| v);
impl_ratio_scalar!(i128, i128::from);

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v)
}

/// Product of an iterator of scalars.
pub fn product<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::one(), |acc, v| acc * v)
}

pub(crate) fn is_unit<S: Scalar>(value: &S) -> bool {
    value.abs() == S::one()
}

pub(crate) fn zero_or_unit<S: Scalar>(value: &S) -> bool {
    value.is_zero() || is_unit(value)
}
