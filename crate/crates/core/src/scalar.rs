//! Coefficient fields shared by the exact and floating-point code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A field usable as form coefficients. `f64` is the working precision;
/// `BigRational` backs the exact identity checks and certifications.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    /// True when arithmetic in this field is exact.
    fn is_exact() -> bool;

    fn from_u128(v: u128) -> Self {
        match i64::try_from(v) {
            Ok(x) => Self::from_i64(x),
            Err(_) => {
                let hi = Self::from_i64((v >> 62) as i64);
                let lo = Self::from_i64((v & ((1u128 << 62) - 1)) as i64);
                hi * Self::from_i64(1i64 << 62) + lo
            }
        }
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_positive() {
                f64::INFINITY
            } else if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                0.0
            }
        })
    }
    fn is_exact() -> bool {
        true
    }
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(|| panic!("non-finite coefficient {v}"))
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_s<T: Scalar>(n: usize, k: usize) -> T {
    T::from_u128(binomial(n, k))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product::<u128>().max(1)
}
