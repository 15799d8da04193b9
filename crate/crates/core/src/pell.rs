//! Solutions of `X² − fY² = ±1` read off the continued fraction of `√f`.

use std::fmt;

use crate::contfrac::{expand_sqrt, SurdExpansion};
use crate::error::{Error, Result};
use crate::scalar::{lit, Int};

/// A positive solution of `X² − fY² = sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution<T> {
    pub f: T,
    pub x: T,
    pub y: T,
    /// `+1` or `-1`.
    pub sign: i8,
    /// 1 for the fundamental solution, `k` for its `k`-th power.
    pub rank: u64,
}

impl<T: Int> PellSolution<T> {
    /// `X² − fY²`.
    pub fn norm(&self) -> T {
        self.x.clone() * self.x.clone() - self.f.clone() * self.y.clone() * self.y.clone()
    }

    pub fn is_valid(&self) -> bool {
        self.norm() == lit(self.sign as i64)
    }
}

impl<T: Int> fmt::Display for PellSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X={} Y={} (X^2 - {}Y^2 = {})", self.x, self.y, self.f, self.sign)
    }
}

/// Smallest `(c, h)` with `c² − fh² = 1`, taken from an existing expansion.
///
/// Even period `n + 1`: `(A_n, B_n)`. Odd period: `(2A_n² + 1, 2A_nB_n)`,
/// which avoids running the recurrence over a second period.
pub fn fundamental_from_expansion<T: Int>(exp: &SurdExpansion<T>) -> PellSolution<T> {
    let n = exp.n() as i64;
    let table = exp.convergent_table(exp.n());
    let (an, bn) = (table.a(n).clone(), table.b(n).clone());
    let two = lit::<T>(2);
    let (x, y) = if exp.is_even_period() {
        (an, bn)
    } else {
        (two.clone() * an.clone() * an.clone() + T::one(), two * an * bn)
    };
    PellSolution { f: exp.radicand().clone(), x, y, sign: 1, rank: 1 }
}

/// Fundamental solution of `X² − fY² = 1`.
pub fn fundamental_solution<T: Int>(f: &T) -> Result<PellSolution<T>> {
    Ok(fundamental_from_expansion(&expand_sqrt(f)?))
}

/// Smallest solution of `X² − fY² = −1`, present exactly when the period of
/// `√f` is odd.
pub fn negative_fundamental<T: Int>(f: &T) -> Result<Option<PellSolution<T>>> {
    let exp = expand_sqrt(f)?;
    if exp.is_even_period() {
        return Ok(None);
    }
    let n = exp.n() as i64;
    let table = exp.convergent_table(exp.n());
    Ok(Some(PellSolution {
        f: f.clone(),
        x: table.a(n).clone(),
        y: table.b(n).clone(),
        sign: -1,
        rank: 1,
    }))
}

/// `(x1 + y1√f)(x2 + y2√f)`.
fn mul_surd<T: Int>(f: &T, (x1, y1): (&T, &T), (x2, y2): (&T, &T)) -> (T, T) {
    (
        x1.clone() * x2.clone() + f.clone() * y1.clone() * y2.clone(),
        x1.clone() * y2.clone() + y1.clone() * x2.clone(),
    )
}

/// `(x + y√f)^k` by repeated squaring.
pub(crate) fn surd_pow<T: Int>(f: &T, x: &T, y: &T, mut k: u64) -> (T, T) {
    let mut acc = (T::one(), T::zero());
    let mut base = (x.clone(), y.clone());
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_surd(f, (&acc.0, &acc.1), (&base.0, &base.1));
        }
        k >>= 1;
        if k > 0 {
            base = mul_surd(f, (&base.0, &base.1), (&base.0, &base.1));
        }
    }
    acc
}

/// The `k`-th solution of `X² − fY² = 1`, i.e. `(c + h√f)^k`.
pub fn nth_solution<T: Int>(f: &T, k: u64) -> Result<PellSolution<T>> {
    if k == 0 {
        return Err(Error::Domain("solution rank must be at least 1".into()));
    }
    let fund = fundamental_solution(f)?;
    let (x, y) = surd_pow(f, &fund.x, &fund.y, k);
    Ok(PellSolution { f: f.clone(), x, y, sign: 1, rank: k })
}

/// A set of residues modulo a small modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residues {
    pub modulus: u32,
    pub values: &'static [u32],
    pub label: &'static str,
}

impl Residues {
    pub fn contains<T: Int>(&self, x: &T) -> bool {
        let r = x.mod_floor(&lit(self.modulus as i64)).to_u32().expect("residue fits u32");
        self.values.contains(&r)
    }
}

/// One admissible combination of residue classes for `(c, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceRow {
    pub c: Residues,
    pub h: Residues,
}

/// The rows admitted for one class of `f mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceProfile {
    pub f_class: u32,
    pub admitted: &'static [CongruenceRow],
}

const PM1_MOD8: Residues = Residues { modulus: 8, values: &[1, 7], label: "±1 (mod 8)" };
const PM1_MOD16: Residues = Residues { modulus: 16, values: &[1, 15], label: "±1 (mod 16)" };
const PM3_MOD8: Residues = Residues { modulus: 8, values: &[3, 5], label: "±3 (mod 8)" };
const ZERO_MOD2: Residues = Residues { modulus: 2, values: &[0], label: "0 (mod 2)" };
const ZERO_MOD4: Residues = Residues { modulus: 4, values: &[0], label: "0 (mod 4)" };
const TWO_MOD4: Residues = Residues { modulus: 4, values: &[2], label: "2 (mod 4)" };
const ONE_MOD2: Residues = Residues { modulus: 2, values: &[1], label: "1 (mod 2)" };

/// Residue classes forced on the fundamental `(c, h)` by `f mod 4`.
///
/// For `f ≡ 1 (mod 4)` the combination `c` even, `h` odd never occurs: it
/// would need `c² ≡ 2 (mod 4)`. That combination is listed only for
/// `f ≡ 3 (mod 4)`. `f ≡ 0 (mod 4)` is not tabulated.
pub const CONGRUENCE_TABLE: [CongruenceProfile; 3] = [
    CongruenceProfile { f_class: 1, admitted: &[CongruenceRow { c: PM1_MOD8, h: ZERO_MOD4 }] },
    CongruenceProfile {
        f_class: 2,
        admitted: &[
            CongruenceRow { c: PM1_MOD16, h: ZERO_MOD4 },
            CongruenceRow { c: PM3_MOD8, h: TWO_MOD4 },
        ],
    },
    CongruenceProfile {
        f_class: 3,
        admitted: &[
            CongruenceRow { c: PM1_MOD8, h: ZERO_MOD4 },
            CongruenceRow { c: ZERO_MOD2, h: ONE_MOD2 },
        ],
    },
];

/// Result of classifying the fundamental solution of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceMatch<T> {
    pub solution: PellSolution<T>,
    /// `None` when `f ≡ 0 (mod 4)`, which lies outside the table.
    pub profile: Option<CongruenceProfile>,
    pub row: Option<CongruenceRow>,
}

/// Computes `(c, h)` for `f` and finds the table row it falls in.
pub fn congruence_check<T: Int>(f: &T) -> Result<CongruenceMatch<T>> {
    let solution = fundamental_solution(f)?;
    let class = f.mod_floor(&lit(4)).to_u32().expect("residue fits u32");
    let Some(profile) = CONGRUENCE_TABLE.iter().copied().find(|p| p.f_class == class) else {
        return Ok(CongruenceMatch { solution, profile: None, row: None });
    };
    let mut rows = profile
        .admitted
        .iter()
        .filter(|row| row.c.contains(&solution.x) && row.h.contains(&solution.y));
    match (rows.next(), rows.next()) {
        (Some(row), None) => Ok(CongruenceMatch { row: Some(*row), profile: Some(profile), solution }),
        _ => Err(Error::Unclassified {
            f: f.to_string(),
            c: solution.x.to_string(),
            h: solution.y.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact_sqrt;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn sol(f: i64) -> (i64, i64) {
        let s = fundamental_solution(&f).unwrap();
        (s.x, s.y)
    }

    /// Every `(X, Y)` with `X² − fY² = ±1` and `Y ≤ y_max`, found by walking
    /// `X` upwards alongside `Y`.
    fn brute_solutions(f: i128, y_max: i128) -> Vec<(i128, i128, i8)> {
        let mut out = Vec::new();
        let mut x: i128 = 1;
        for y in 1..=y_max {
            let target = f * y * y;
            while (x + 1) * (x + 1) <= target + 1 {
                x += 1;
            }
            // x is now ⌊√(fY² + 1)⌋; the only candidates are x and x − 1
            for cand in [x - 1, x] {
                let d = cand * cand - target;
                if d == 1 || d == -1 {
                    out.push((cand, y, d as i8));
                }
            }
        }
        out
    }

    #[test]
    fn golden_fundamental_solutions() {
        assert_eq!(sol(22), (197, 42));
        assert_eq!(sol(57), (151, 20));
        assert_eq!(sol(43), (3482, 531));
        assert_eq!(sol(3), (2, 1));
        assert_eq!(sol(2), (3, 2));
    }

    #[test]
    fn large_fundamental_solution() {
        // 61 is the classic case with a large fundamental solution
        let s = fundamental_solution(&BigInt::from(61)).unwrap();
        assert_eq!(s.x, "1766319049".parse::<BigInt>().unwrap());
        assert_eq!(s.y, BigInt::from(226153980));
        assert!(s.is_valid());
    }

    #[test]
    fn negative_solutions() {
        let n2 = negative_fundamental(&2i64).unwrap().unwrap();
        assert_eq!((n2.x, n2.y, n2.sign), (1, 1, -1));
        let n5 = negative_fundamental(&5i64).unwrap().unwrap();
        assert_eq!((n5.x, n5.y), (2, 1));
        assert_eq!(negative_fundamental(&3i64).unwrap(), None);
        assert_eq!(negative_fundamental(&16i64), Err(Error::PerfectSquare("16".into())));
    }

    #[test]
    fn higher_ranks() {
        let s = nth_solution(&3i64, 2).unwrap();
        assert_eq!((s.x, s.y, s.rank), (7, 4, 2));
        let s = nth_solution(&2i64, 2).unwrap();
        assert_eq!((s.x, s.y), (17, 12));
        let s = nth_solution(&22i64, 1).unwrap();
        assert_eq!((s.x, s.y), (197, 42));
        assert!(matches!(nth_solution(&22i64, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn congruence_rows() {
        let m = congruence_check(&22i64).unwrap();
        let row = m.row.unwrap();
        assert_eq!((row.c.label, row.h.label), ("±3 (mod 8)", "2 (mod 4)"));
        let m = congruence_check(&57i64).unwrap();
        let row = m.row.unwrap();
        assert_eq!((row.c.label, row.h.label), ("±1 (mod 8)", "0 (mod 4)"));
        let m = congruence_check(&43i64).unwrap();
        let row = m.row.unwrap();
        assert_eq!((row.c.label, row.h.label), ("0 (mod 2)", "1 (mod 2)"));
        let m = congruence_check(&8i64).unwrap();
        assert_eq!((m.profile, m.row), (None, None));
        assert_eq!((m.solution.x, m.solution.y), (3, 1));
    }

    #[test]
    fn minimality_and_period_structure_small_f() {
        for f in 2..=300i64 {
            if exact_sqrt(&f).is_some() {
                continue;
            }
            let exp = crate::contfrac::expand_sqrt(&BigInt::from(f)).unwrap();
            let fund = fundamental_from_expansion(&exp);
            let (fx, fy) = (fund.x.to_i128().unwrap_or(i128::MAX), fund.y.to_i128().unwrap_or(i128::MAX));
            let len = exp.period_length();
            // convergents at the period boundaries, index k(n+1) − 1
            let table = exp.convergent_table(12 * len);
            let boundary: Vec<(i128, i128)> = (1..=12)
                .map(|k| {
                    let i = (k * len - 1) as i64;
                    (table.a(i).to_i128().unwrap_or(i128::MAX), table.b(i).to_i128().unwrap_or(i128::MAX))
                })
                .collect();
            let found = brute_solutions(f as i128, 10_000);
            for (x, y, sign) in &found {
                assert!(boundary.contains(&(*x, *y)), "f={f}: ({x},{y}) not at a period boundary");
                if *sign == 1 {
                    assert!(*y >= fy, "f={f}: smaller solution ({x},{y})");
                }
            }
            let has_negative = found.iter().any(|s| s.2 == -1);
            if fy <= 10_000 {
                assert!(found.contains(&(fx, fy, 1)), "f={f}");
                // a negative solution, if any, lies below the positive one
                assert_eq!(has_negative, !exp.is_even_period(), "f={f}");
            }
        }
    }

    proptest! {
        #[test]
        fn ranks_increase_and_solve(f in 2u32..5000, k in 1u64..6) {
            let f = BigInt::from(f);
            prop_assume!(exact_sqrt(&f).is_none());
            let a = nth_solution(&f, k).unwrap();
            let b = nth_solution(&f, k + 1).unwrap();
            prop_assert!(a.is_valid() && b.is_valid());
            prop_assert!(b.x > a.x && b.y > a.y);
        }

        #[test]
        fn negative_exists_iff_odd_period(f in 2u32..20_000) {
            let f = f as i64;
            prop_assume!(exact_sqrt(&f).is_none());
            let odd = !crate::contfrac::expand_sqrt(&BigInt::from(f)).unwrap().is_even_period();
            let neg = negative_fundamental(&BigInt::from(f)).unwrap();
            prop_assert_eq!(neg.is_some(), odd);
            if let Some(n) = neg {
                prop_assert!(n.is_valid());
            }
        }
    }
}
