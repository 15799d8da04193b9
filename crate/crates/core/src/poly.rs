//! Dense univariate polynomials over an exact coefficient ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed, Zero};

/// Polynomial in `t`, coefficients stored constant term first with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `slope · t + intercept`.
    pub fn linear(intercept: T, slope: T) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Coefficient-wise map into another ring.
    pub fn map<U: Num + Clone>(&self, f: impl FnMut(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Coefficient-wise fallible map; `None` if any coefficient fails.
    pub fn try_map<U: Num + Clone>(&self, f: impl FnMut(&T) -> Option<U>) -> Option<Polynomial<U>> {
        self.coeffs.iter().map(f).collect::<Option<Vec<_>>>().map(Polynomial::new)
    }

    /// `self(other(t))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * other) + &Self::constant(c.clone()))
    }
}

impl<T: Integer + Clone> Polynomial<Ratio<T>> {
    /// Integer polynomial when every coefficient has denominator 1.
    pub fn to_integral(&self) -> Option<Polynomial<T>> {
        self.try_map(|c| c.is_integer().then(|| c.to_integer()))
    }
}

impl<T: Integer + Clone> Polynomial<T> {
    pub fn to_rational(&self) -> Polynomial<Ratio<T>> {
        self.map(|c| Ratio::from_integer(c.clone()))
    }
}

impl<T: Num + Clone> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Num + Clone> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Num + Clone> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Num + Clone + Neg<Output = T>> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.map(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Num + Clone> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Renders as `1764t^2 + 394t + 22`, highest power first.
impl<T: Num + Clone + Signed + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == T::one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{k}")?,
                _ => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial<i64> {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[5]).is_constant());
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&(&a * &a) - &p(&[0, 2]), p(&[1, 0, 1]));
        assert_eq!(p(&[3, 0, 1]).compose(&p(&[0, 2])), p(&[3, 0, 4]));
        assert_eq!(p(&[22, 394, 1764]).eval(&1), 2180);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[22, 394, 1764]).to_string(), "1764t^2 + 394t + 22");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "t^2 - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(p(&[]).to_string(), "0");
    }

    #[test]
    fn rational_round_trip() {
        let q = p(&[1, 2]).to_rational().scale(&Ratio::new(1, 2));
        assert_eq!(q.to_integral(), None);
        assert_eq!(q.scale(&Ratio::from_integer(2)).to_integral(), Some(p(&[1, 2])));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial<BigInt>> {
        proptest::collection::vec(-50i64..50, 0..5)
            .prop_map(|v| Polynomial::new(v.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_map(a in small_poly(), b in small_poly(), t in -20i64..20) {
            let t = BigInt::from(t);
            prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
            prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
            prop_assert_eq!(a.compose(&b).eval(&t), a.eval(&b.eval(&t)));
        }
    }
}
