//! Scalar abstraction shared by the exact-arithmetic modules.
//!
//! Every routine in [`crate::contfrac`], [`crate::pell`], [`crate::poly`] and
//! [`crate::families`] is written against [`Int`], so it runs unchanged over
//! `i64`, `i128` or [`num_bigint::BigInt`]. The crate root fixes the
//! arbitrary-precision instantiation through type aliases; the fixed-width
//! instantiations are only safe while the values involved stay in range.

use std::fmt::{Debug, Display};

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer scalar.
pub trait Int:
    Integer + Signed + Roots + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Lifts a small constant into `T`.
#[inline]
pub fn lit<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("small literal fits every scalar")
}

/// `(-1)^k` for a possibly negative exponent.
#[inline]
pub fn neg_one_pow<T: Int>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Floor square root, or `None` for negative input.
pub fn isqrt<T: Int>(n: &T) -> Option<T> {
    if n.is_negative() {
        None
    } else {
        Some(n.sqrt())
    }
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt<T: Int>(n: &T) -> Option<T> {
    let r = isqrt(n)?;
    if r.clone() * r.clone() == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&49i64), Some(7));
        assert_eq!(exact_sqrt(&50i64), None);
        assert_eq!(exact_sqrt(&-4i64), None);
        let big: BigInt = "152100005850000057".parse().unwrap();
        assert_eq!(exact_sqrt(&(big.clone() * big.clone())), Some(big));
    }

    #[test]
    fn sign_powers() {
        assert_eq!(neg_one_pow::<i64>(-1), -1);
        assert_eq!(neg_one_pow::<i64>(-2), 1);
        assert_eq!(neg_one_pow::<i64>(3), -1);
    }
}
