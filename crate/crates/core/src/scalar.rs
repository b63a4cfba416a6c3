//! Scalar abstraction shared by every algebraic routine in the crate.
//!
//! All combinatorial sums are written against [`Scalar`], so the same code
//! runs over exact rationals ([`crate::Rational`]) and over `f64` when a quick
//! floating-point estimate is enough. Exact equality tests (vanishing of
//! cumulants, fixed points) are only meaningful for exact types.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

use crate::error::{Error, Result};

/// Field-like scalar type used throughout the engine.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    /// Lossless conversion from a small integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar type")
    }

    /// `self^exp` by repeated squaring.
    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + PartialOrd + Debug + Num + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// Falling factorial `n (n-1) ... (n-k+1)` evaluated in the scalar type.
pub fn falling_factorial<T: Scalar>(n: u64, k: usize) -> T {
    let mut acc = T::one();
    for i in 0..k as u64 {
        if i >= n {
            return T::zero();
        }
        acc = acc * T::from_u64(n - i).expect("integer representable in scalar type");
    }
    acc
}

/// Parses `"p/q"` or `"p"` into an exact rational. Floating-point syntax is rejected.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational '{text}' (expected p/q or integer)"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) {
        return Err(bad());
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = den.trim_start_matches('+').parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{text}'")));
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Sign of an exact rational as -1, 0 or 1.
pub fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Shorthand for `BigRational::new(p, q)` from machine integers.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `true` when `x == 1` exactly.
pub fn is_one<T: Scalar>(x: &T) -> bool {
    *x == T::one()
}
