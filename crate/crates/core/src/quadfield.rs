//! Fundamental units of real quadratic fields `ℚ(√D)` and squarefree testing.
//!
//! The unit is read off the continued fraction of `√D`: with period length
//! `s`, the convergent `(P, Q) = (A_{s−1}, B_{s−1})` gives `P + Q√D`. When
//! `D ≡ 5 (mod 8)` the ring of integers also contains `(a + b√D)/2` with
//! `a, b` odd, and the fundamental unit may be such an element whose cube is
//! `P + Q√D`. That case is settled by exact integer arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::contfrac::expand_sqrt;
use crate::error::{Error, Result};
use crate::factor;
use crate::families::{instantiate, FamilyId};
use crate::scalar::exact_sqrt;

/// Seed used for Pollard-Brent splitting when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeStatus {
    pub n: BigInt,
    pub squarefree: bool,
    /// Smallest prime whose square divides `n`.
    pub witness: Option<BigInt>,
}

/// Decides squarefreeness of `n ≥ 1` by complete factorization.
pub fn is_squarefree(n: &BigInt) -> Result<SquarefreeStatus> {
    is_squarefree_seeded(n, DEFAULT_SEED)
}

pub fn is_squarefree_seeded(n: &BigInt, seed: u64) -> Result<SquarefreeStatus> {
    let Some(mag) = n.to_biguint().filter(|m| !m.is_zero()) else {
        return Err(Error::Domain(format!("squarefree test needs n >= 1, got {n}")));
    };
    let witness = factor::square_witness(&mag, seed).map(BigInt::from);
    Ok(SquarefreeStatus { n: n.clone(), squarefree: witness.is_none(), witness })
}

/// `(a + b√D) / denom` with `denom ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub d: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub denom: u8,
    pub norm: i8,
}

impl FundamentalUnit {
    /// `(a² − Db²) / denom²`, exact.
    pub fn exact_norm(&self) -> BigInt {
        let raw = &self.a * &self.a - &self.d * &self.b * &self.b;
        raw / BigInt::from(self.denom as u32 * self.denom as u32)
    }

    pub fn is_valid(&self) -> bool {
        self.exact_norm() == BigInt::from(self.norm)
    }

    /// The unit written over denominator 1 after cubing when it is a half
    /// integer, i.e. the convergent `(P, Q)` it was derived from.
    pub fn integral_power(&self) -> (BigInt, BigInt, u32) {
        if self.denom == 1 {
            return (self.a.clone(), self.b.clone(), 1);
        }
        let (a, b, d) = (&self.a, &self.b, &self.d);
        let p = (a * a * a + BigInt::from(3) * a * b * b * d) / 8;
        let q = (BigInt::from(3) * a * a * b + b * b * b * d) / 8;
        (p, q, 3)
    }

    /// Approximate real value, for ordering and display only.
    pub fn approx(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::INFINITY);
        let a = self.a.to_f64().unwrap_or(f64::INFINITY);
        let b = self.b.to_f64().unwrap_or(f64::INFINITY);
        (a + b * d.sqrt()) / self.denom as f64
    }
}

impl fmt::Display for FundamentalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.norm > 0 { "+1" } else { "-1" };
        if self.denom == 1 {
            write!(f, "{} + {}*sqrt(D), norm {sign}", self.a, self.b)
        } else {
            write!(f, "({} + {}*sqrt(D))/2, norm {sign}", self.a, self.b)
        }
    }
}

/// Fundamental unit of `ℚ(√D)` for squarefree `D ≥ 2`.
pub fn fundamental_unit(d: &BigInt) -> Result<FundamentalUnit> {
    if *d < BigInt::from(2) {
        return Err(Error::Domain(format!("D must be at least 2, got {d}")));
    }
    let status = is_squarefree(d)?;
    if let Some(w) = status.witness {
        return Err(Error::NotSquarefree { n: d.to_string(), witness: w.to_string() });
    }
    Ok(unit_of_squarefree(d))
}

fn unit_of_squarefree(d: &BigInt) -> FundamentalUnit {
    let exp = expand_sqrt(d).expect("squarefree D >= 2 is not a square");
    let n = exp.n() as i64;
    let table = exp.convergent_table(exp.n());
    let (p, q) = (table.a(n).clone(), table.b(n).clone());
    let norm = if exp.is_even_period() { 1 } else { -1 };
    if d.mod_floor(&BigInt::from(8)) == BigInt::from(5) {
        if let Some((a, b)) = cube_root_in_field(&p, &q, d) {
            return FundamentalUnit { d: d.clone(), a, b, denom: 2, norm };
        }
    }
    FundamentalUnit { d: d.clone(), a: p, b: q, denom: 1, norm }
}

/// Odd `(a, b)` with `((a + b√D)/2)³ = P + Q√D`, if such a pair exists.
///
/// Writing `ε = (a + b√D)/2` and `ε'` for its conjugate, `ε³ = P + Q√D` lies
/// within 1 of `2P` and `|ε'| < 1`, so `a = ε + ε'` is within 2 of the
/// integer cube root of `2P`. Each odd candidate fixes `b² = (a² ∓ 4)/D`
/// and is accepted only if the cube expands back to `(P, Q)` exactly.
pub fn cube_root_in_field(p: &BigInt, q: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt)> {
    if !p.is_positive() || !q.is_positive() || !d.is_positive() {
        return None;
    }
    let centre: BigInt = (p * 2u32).cbrt();
    let four = BigInt::from(4);
    let eight = BigInt::from(8);
    let three = BigInt::from(3);
    let mut a: BigInt = &centre - 3;
    while a <= &centre + 3 {
        if a.is_positive() && a.is_odd() {
            let a2 = &a * &a;
            for num in [&a2 - &four, &a2 + &four] {
                if num.is_negative() || !(&num % d).is_zero() {
                    continue;
                }
                let Some(b) = exact_sqrt(&(&num / d)) else { continue };
                if !b.is_odd() {
                    continue;
                }
                let x = &a2 * &a + &three * &a * &b * &b * d;
                let y = &three * &a2 * &b + &b * &b * &b * d;
                if x == p * &eight && y == q * &eight {
                    return Some((a, b));
                }
            }
        }
        a += 1;
    }
    None
}

/// `X(t) + Y(t)√D` with `D = f(t)` for the given family, cross-checked
/// against the unit computed directly from the expansion of `√D`.
///
/// Fails with a congruence error when `D ≡ 0 (mod 4)` (not squarefree) or
/// `D ≡ 5 (mod 8)` (a half-integral unit may be smaller), and with
/// [`Error::NormMinusOne`] when the field's unit has norm `−1` and squares to
/// the family solution.
pub fn unit_from_family(family: FamilyId, f: &BigInt, t: &BigInt) -> Result<FundamentalUnit> {
    let inst = instantiate(family, f)?;
    let (d, x, y) = inst.eval(t);
    if d < BigInt::from(2) {
        return Err(Error::Domain(format!("{family}({t}) = {d} is below 2")));
    }
    match d.mod_floor(&BigInt::from(8)).to_u8() {
        Some(0) | Some(4) => {
            return Err(Error::Congruence(format!("{family} at t={t}: D={d} is divisible by 4")))
        }
        Some(5) => {
            return Err(Error::Congruence(format!(
                "{family} at t={t}: D={d} is 5 mod 8, so the unit may be half-integral"
            )))
        }
        _ => {}
    }
    let status = is_squarefree(&d)?;
    if let Some(w) = status.witness {
        return Err(Error::NotSquarefree { n: d.to_string(), witness: w.to_string() });
    }
    let unit = unit_of_squarefree(&d);
    cross_check(family, t, unit, &x, &y)
}

/// Compares the family's `X + Y√D` with the unit read off the expansion.
fn cross_check(family: FamilyId, t: &BigInt, unit: FundamentalUnit, x: &BigInt, y: &BigInt) -> Result<FundamentalUnit> {
    let d = unit.d.clone();
    if unit.denom == 1 && unit.a == *x && unit.b == *y {
        return Ok(unit);
    }
    if unit.norm == -1 && unit.denom == 1 {
        let sq_a = &unit.a * &unit.a + &d * &unit.b * &unit.b;
        let sq_b = BigInt::from(2) * &unit.a * &unit.b;
        if sq_a == *x && sq_b == *y {
            return Err(Error::NormMinusOne { d: d.to_string() });
        }
    }
    Err(Error::Mismatch(format!(
        "{family} at t={t}: family gives {x} + {y}*sqrt({d}), field unit is {unit}"
    )))
}
