//! Exact nonnegative integers with a natural-log shadow.

use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::fmath;

/// An exact count together with `ln` of its value.
///
/// The shadow is `-inf` for zero. For values that fit in an `f64` mantissa
/// the shadow agrees with `ln(exact)` to within a few ulps.
#[derive(Clone, PartialEq)]
pub struct BigCount {
    exact: BigUint,
    ln: f64,
}

impl BigCount {
    pub fn new(exact: BigUint) -> Self {
        let ln = ln_biguint(&exact);
        BigCount { exact, ln }
    }

    pub fn from_u64(v: u64) -> Self {
        Self::new(BigUint::from(v))
    }

    pub fn zero() -> Self {
        Self::new(BigUint::zero())
    }

    pub fn one() -> Self {
        Self::new(BigUint::one())
    }

    pub fn exact(&self) -> &BigUint {
        &self.exact
    }

    pub fn into_exact(self) -> BigUint {
        self.exact
    }

    /// Natural logarithm of the value (`-inf` for zero).
    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact.to_u64()
    }

    pub fn to_f64(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Debug for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigCount({})", self.exact)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.exact, f)
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount::new(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.exact == BigUint::from(*other)
    }
}

/// `ln(x)` for an arbitrary-size unsigned integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return fmath::ln(x.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    fmath::ln(top as f64) + shift as f64 * core::f64::consts::LN_2
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}
