//! Periodic continued fractions of `√f` and their convergents.
//!
//! The expansion is driven by the usual integer side sequences
//!
//! ```text
//! r_0 = 0, s_0 = 1, a_0 = ⌊√f⌋
//! r_{k+1} = a_k s_k − r_k
//! s_{k+1} = (f − r_{k+1}²) / s_k
//! a_{k+1} = ⌊(a_0 + r_{k+1}) / s_{k+1}⌋
//! ```
//!
//! and stops at the first `k ≥ 1` with `s_k = 1`, where `a_k = 2a_0` closes
//! the period. Convergents use the seeds `A_{-1} = B_{-2} = 1`,
//! `A_{-2} = B_{-1} = 0`, so `A_i / B_i` is the value of `[a_0; a_1, …, a_i]`.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, lit, neg_one_pow, Int};

/// One full period of the continued fraction of `√f` together with the
/// `r`/`s` side sequences that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdExpansion<T> {
    f: T,
    a0: T,
    period: Vec<T>,
    // r_k, s_k for k = 0..=period.len(); s at the last index is 1 again.
    r: Vec<T>,
    s: Vec<T>,
}

fn check_radicand<T: Int>(f: &T) -> Result<()> {
    if *f < lit(2) {
        return Err(Error::Domain(format!("radicand must be at least 2, got {f}")));
    }
    if exact_sqrt(f).is_some() {
        return Err(Error::PerfectSquare(f.to_string()));
    }
    Ok(())
}

/// Expands `√f` over one full period.
pub fn expand_sqrt<T: Int>(f: &T) -> Result<SurdExpansion<T>> {
    Ok(expand_sqrt_bounded(f, usize::MAX)?.expect("unbounded expansion always closes"))
}

/// Like [`expand_sqrt`], but gives up with `Ok(None)` once more than
/// `max_period` quotients have been produced without closing the period.
pub fn expand_sqrt_bounded<T: Int>(f: &T, max_period: usize) -> Result<Option<SurdExpansion<T>>> {
    check_radicand(f)?;
    let a0 = f.sqrt();
    let mut r = vec![T::zero()];
    let mut s = vec![T::one()];
    let mut period = Vec::new();
    let mut a = a0.clone();
    loop {
        if period.len() >= max_period {
            return Ok(None);
        }
        let (r_prev, s_prev) = (r.last().unwrap(), s.last().unwrap());
        let r_next = a.clone() * s_prev.clone() - r_prev.clone();
        let num = f.clone() - r_next.clone() * r_next.clone();
        debug_assert!(num.is_multiple_of(s_prev), "s_k must divide f - r_(k+1)^2");
        let s_next = num / s_prev.clone();
        a = (a0.clone() + r_next.clone()) / s_next.clone();
        debug_assert!(
            period.is_empty() || (&r_next, &s_next) != (&r[1], &s[1]),
            "(r, s) repeated before s returned to 1"
        );
        let closed = s_next.is_one();
        r.push(r_next);
        s.push(s_next);
        period.push(a.clone());
        if closed {
            break;
        }
    }
    Ok(Some(SurdExpansion { f: f.clone(), a0, period, r, s }))
}

impl<T: Int> SurdExpansion<T> {
    pub fn radicand(&self) -> &T {
        &self.f
    }

    /// `⌊√f⌋`.
    pub fn a0(&self) -> &T {
        &self.a0
    }

    /// `a_1, …, a_n, 2a_0`.
    pub fn period(&self) -> &[T] {
        &self.period
    }

    /// Number of quotients in one period (`n + 1`).
    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    /// `n`, the index of the last quotient before `2a_0`.
    pub fn n(&self) -> usize {
        self.period.len() - 1
    }

    /// `m` with period `2m` or `2m + 1`.
    pub fn half_index(&self) -> usize {
        self.period.len() / 2
    }

    pub fn is_even_period(&self) -> bool {
        self.period.len().is_multiple_of(2)
    }

    /// Quotients strictly inside the period, `a_1, …, a_n`.
    pub fn interior(&self) -> &[T] {
        &self.period[..self.period.len() - 1]
    }

    /// `a_k` for any `k ≥ 0`, following the periodicity.
    pub fn quotient(&self, k: usize) -> &T {
        if k == 0 {
            &self.a0
        } else {
            &self.period[(k - 1) % self.period.len()]
        }
    }

    fn periodic_index(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else {
            (k - 1) % self.period.len() + 1
        }
    }

    /// `r_k` for any `k ≥ 0`.
    pub fn r(&self, k: usize) -> &T {
        &self.r[self.periodic_index(k)]
    }

    /// `s_k` for any `k ≥ 0`.
    pub fn s(&self, k: usize) -> &T {
        &self.s[self.periodic_index(k)]
    }

    /// `r_0, …, r_{n+1}`.
    pub fn r_seq(&self) -> &[T] {
        &self.r
    }

    /// `s_0, …, s_{n+1}`.
    pub fn s_seq(&self) -> &[T] {
        &self.s
    }

    /// Convergents `A_i / B_i` for `-2 ≤ i ≤ upto`.
    pub fn convergent_table(&self, upto: usize) -> ConvergentTable<T> {
        ConvergentTable::build((0..=upto).map(|k| self.quotient(k).clone()))
    }

    /// Value of the purely periodic tail `[a_1; a_2, …, a_n, 2a_0, …]` as the
    /// quadratic surd `(p + q√f) / d`, returned as `(p, q, d)` in lowest terms
    /// with `d > 0`.
    ///
    /// The tail `x` is fixed by `x = (A x + A') / (B x + B')`, where `A/B`,
    /// `A'/B'` are the last two convergents of one period; its positive root
    /// equals `1 / (√f − a_0) = (√f + a_0) / (f − a_0²)`.
    pub fn periodic_tail(&self) -> (T, T, T) {
        // Convergents of [a_1; a_2, …, a_{n+1}] with a_{n+1} = 2a_0.
        let table = ConvergentTable::build(self.period.iter().cloned());
        let last = self.period.len() as i64 - 1;
        let (p1, q1) = (table.a(last).clone(), table.b(last).clone());
        let (p0, q0) = (table.a(last - 1).clone(), table.b(last - 1).clone());
        // q1 x² + (q0 − p1) x − p0 = 0, positive root.
        let two = lit::<T>(2);
        let disc = (q0.clone() - p1.clone()) * (q0.clone() - p1.clone())
            + lit::<T>(4) * q1.clone() * p0;
        let denom = two * q1;
        let lin = p1 - q0;
        // disc = k² f for some integer k because the root lies in Q(√f).
        let ratio = disc / self.f.clone();
        let k = exact_sqrt(&ratio).expect("tail discriminant is a square multiple of f");
        let g = lin.gcd(&k).gcd(&denom);
        (lin / g.clone(), k / g.clone(), denom / g)
    }

    /// True when `a_1, …, a_n` reads the same reversed.
    pub fn is_palindromic(&self) -> bool {
        let interior = self.interior();
        interior.iter().eq(interior.iter().rev())
    }
}

impl<T: Int> fmt::Display for SurdExpansion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.a0)?;
        for (i, q) in self.period.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")
    }
}

/// Numerator and denominator of the convergent with the given index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair<T> {
    pub index: i64,
    pub a: T,
    pub b: T,
}

/// Convergents of a simple continued fraction, indexed from `-2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable<T> {
    rows: Vec<ConvergentPair<T>>,
}

impl<T: Int> ConvergentTable<T> {
    /// Runs the three-term recurrence over `b_0, b_1, …`.
    pub fn build(quotients: impl IntoIterator<Item = T>) -> Self {
        let mut rows = vec![
            ConvergentPair { index: -2, a: T::zero(), b: T::one() },
            ConvergentPair { index: -1, a: T::one(), b: T::zero() },
        ];
        for (i, q) in quotients.into_iter().enumerate() {
            let (p2, p1) = (&rows[i], &rows[i + 1]);
            let a = q.clone() * p1.a.clone() + p2.a.clone();
            let b = q * p1.b.clone() + p2.b.clone();
            rows.push(ConvergentPair { index: i as i64, a, b });
        }
        Self { rows }
    }

    /// Largest available index.
    pub fn last_index(&self) -> i64 {
        self.rows.len() as i64 - 3
    }

    pub fn get(&self, i: i64) -> &ConvergentPair<T> {
        assert!(
            (-2..=self.last_index()).contains(&i),
            "convergent index {i} outside -2..={}",
            self.last_index()
        );
        &self.rows[(i + 2) as usize]
    }

    pub fn a(&self, i: i64) -> &T {
        &self.get(i).a
    }

    pub fn b(&self, i: i64) -> &T {
        &self.get(i).b
    }

    /// Pairs with index `0..=last_index()`.
    pub fn pairs(&self) -> &[ConvergentPair<T>] {
        &self.rows[2..]
    }
}

/// Convergents `(A_0, B_0), …, (A_k, B_k)` of `[a0; quotients…]`.
pub fn convergents<T: Int>(a0: &T, quotients: &[T], k: usize) -> Result<Vec<ConvergentPair<T>>> {
    let available = quotients.len() + 1;
    if k >= available {
        return Err(Error::Index { requested: k, available });
    }
    let seq = std::iter::once(a0.clone()).chain(quotients[..k].iter().cloned());
    Ok(ConvergentTable::build(seq).pairs().to_vec())
}

/// Value of `[b_m; b_{m-1}, …, b_0]` for `quotients = b_0, …, b_m`.
///
/// This equals `P_m / P_{m-1}` where `P_i` are the numerators of the forward
/// fraction `[b_0; b_1, …]`.
pub fn reversed_value<T: Int>(quotients: &[T]) -> Result<Ratio<T>> {
    if quotients.is_empty() {
        return Err(Error::Domain("reversal of an empty quotient list".into()));
    }
    if let Some(bad) = quotients.iter().find(|q| !q.is_positive()) {
        return Err(Error::Domain(format!("quotients must be positive, got {bad}")));
    }
    // consecutive convergents are coprime, so no reduction is needed
    let table = ConvergentTable::build(quotients.iter().rev().cloned());
    let last = table.last_index();
    Ok(Ratio::new_raw(table.a(last).clone(), table.b(last).clone()))
}

/// One checked identity within an [`IdentityReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityLine {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// Outcome of evaluating the structural identities of `√f`'s expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport<T> {
    pub f: T,
    pub period_length: usize,
    pub lines: Vec<IdentityLine>,
}

impl<T> IdentityReport<T> {
    pub fn all_hold(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityLine> {
        self.lines.iter().filter(|l| !l.holds)
    }
}

/// Evaluates every identity that applies to the expansion of `√f`.
///
/// Which lines appear depends on the period: the half-period formulas split
/// on parity, the `hA_{m-1} = (c-1)B_{m-1}` relation needs period `≡ 2 mod 4`,
/// and the middle-quotient relations need an even period whose middle
/// quotient is `a_0` or `a_0 − 1`.
pub fn identity_report<T: Int>(f: &T) -> Result<IdentityReport<T>> {
    let exp = expand_sqrt(f)?;
    let len = exp.period_length();
    let n = exp.n() as i64;
    let m = exp.half_index() as i64;
    let a0 = exp.a0().clone();
    // Two periods cover every index used below, including A_{2n+1}.
    let conv = exp.convergent_table(2 * len);
    let (a, b) = (|i: i64| conv.a(i).clone(), |i: i64| conv.b(i).clone());
    let one = T::one();
    let two = lit::<T>(2);
    let mut lines = Vec::new();
    let mut push = |name: &'static str, holds: bool, detail: String| {
        lines.push(IdentityLine { name, holds, detail });
    };

    // Smallest solution of c² − f h² = 1, read straight off the convergents.
    let (c, h) = if exp.is_even_period() { (a(n), b(n)) } else { (a(2 * n + 1), b(2 * n + 1)) };
    push(
        "pell",
        c.clone() * c.clone() - f.clone() * h.clone() * h.clone() == one,
        format!("c={c} h={h}"),
    );

    let det_ok = (0..=conv.last_index()).all(|i| {
        a(i) * b(i - 1) - a(i - 1) * b(i) == neg_one_pow::<T>(i - 1)
    });
    push("convergent determinant", det_ok, format!("A_i B_(i-1) - A_(i-1) B_i for i <= {}", conv.last_index()));

    let quotients: Vec<T> = (0..=len).map(|k| exp.quotient(k).clone()).collect();
    let rev_ok = (0..quotients.len()).all(|k| {
        let lhs = reversed_value(&quotients[..=k]).expect("positive quotients");
        lhs == Ratio::new(a(k as i64), a(k as i64 - 1))
    });
    push("reversal", rev_ok, "[a_k; ..., a_0] = A_k / A_(k-1)".into());

    let mut cross_ok = true;
    let mut norm_ok = true;
    for k in -1..=(2 * len as i64 - 1) {
        let r_next = exp.r((k + 1) as usize).clone();
        let s_next = exp.s((k + 1) as usize).clone();
        cross_ok &= a(k) * a(k - 1) - f.clone() * b(k) * b(k - 1) == neg_one_pow::<T>(k) * r_next;
        norm_ok &= a(k) * a(k) - f.clone() * b(k) * b(k) == neg_one_pow::<T>(k + 1) * s_next;
    }
    push("cross term", cross_ok, "A_k A_(k-1) - f B_k B_(k-1) = (-1)^k r_(k+1)".into());
    push("convergent norm", norm_ok, "A_k^2 - f B_k^2 = (-1)^(k+1) s_(k+1)".into());

    push(
        "r bounded by a0",
        exp.r_seq().iter().all(|r| *r <= a0),
        format!("max r = {}", exp.r_seq().iter().max().unwrap()),
    );

    let closes = exp.period().last() == Some(&(two.clone() * a0.clone()))
        && exp.s_seq()[1..len].iter().all(|s| !s.is_one());
    push("period closes at 2a0", closes, exp.to_string());
    push("palindromic interior", exp.is_palindromic(), exp.to_string());

    let middle_ok = exp.is_even_period() && {
        let am = exp.quotient(m as usize);
        *am == a0 || *am == a0.clone() - one.clone()
    };

    if exp.is_even_period() {
        let c_half = a(m) * b(m - 1) + a(m - 1) * b(m - 2);
        let h_half = b(m - 1) * (b(m) + b(m - 2));
        push(
            "even-period half formula",
            c_half == c && h_half == h,
            format!("A_m B_(m-1) + A_(m-1) B_(m-2) = {c_half}, B_(m-1)(B_m + B_(m-2)) = {h_half}"),
        );
    } else {
        let u = a(m) * b(m) + a(m - 1) * b(m - 1);
        let bsq = b(m) * b(m) + b(m - 1) * b(m - 1);
        let c_long = (a(m) * a(m) + a(m - 1) * a(m - 1)) * bsq.clone() + u.clone() * u.clone();
        let c_short = two.clone() * u.clone() * u.clone() + one.clone();
        let h_half = two.clone() * u * bsq;
        push(
            "odd-period half formula",
            c_long == c && c_short == c && h_half == h,
            format!("c = {c_short}, h = {h_half}"),
        );
    }

    if len % 4 == 2 {
        let lhs = h.clone() * a(m - 1) - (c.clone() - one.clone()) * b(m - 1);
        push("h A_(m-1) = (c-1) B_(m-1)", lhs.is_zero(), format!("difference {lhs}"));
    }

    push(
        "A_n = a0 B_n + B_(n-1)",
        a(n) == a0.clone() * b(n) + b(n - 1),
        format!("A_n = {}", a(n)),
    );
    push(
        "B_n (f - a0^2) = A_(n-1) + a0 B_(n-1)",
        b(n) * (f.clone() - a0.clone() * a0.clone()) == a(n - 1) + a0.clone() * b(n - 1),
        format!("B_n = {}", b(n)),
    );

    if !exp.is_even_period() {
        let c9 = two.clone() * a(n) * a(n) + one.clone();
        let h9 = two.clone() * a(n) * b(n);
        push(
            "odd-period doubling",
            c9 == c && h9 == h,
            format!("2A_n^2 + 1 = {c9}, 2 A_n B_n = {h9}"),
        );
    }

    if middle_ok {
        push("middle s equals 2", *exp.s(m as usize) == two, format!("s_m = {}", exp.s(m as usize)));
        let sum = b(m) + b(m - 2);
        push(
            "A_(m-1) = B_m + B_(m-2)",
            a(m - 1) == sum,
            format!("A_(m-1) = {}, B_m + B_(m-2) = {sum}", a(m - 1)),
        );
        let (label, target) = if m % 2 == 1 {
            ("c - 1 = A_(m-1)(B_m + B_(m-2))", c.clone() - one.clone())
        } else {
            ("c + 1 = A_(m-1)(B_m + B_(m-2))", c.clone() + one.clone())
        };
        push(label, a(m - 1) * sum == target, format!("m = {m}"));
    }

    Ok(IdentityReport { f: f.clone(), period_length: len, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn period_of(f: i64) -> (i64, Vec<i64>) {
        let e = expand_sqrt(&f).unwrap();
        (*e.a0(), e.period().to_vec())
    }

    /// Continued fraction of the rational `⌊√f · 2^k⌋ / 2^k` by Euclid's
    /// algorithm: agrees with the expansion of `√f` on its leading terms.
    fn euclid_oracle(f: i64, bits: u32) -> Vec<BigInt> {
        let scale = BigInt::from(1) << bits;
        let mut num = (BigInt::from(f) * &scale * &scale).sqrt();
        let mut den = scale;
        let mut out = Vec::new();
        while den != BigInt::from(0) {
            let (q, r) = num.div_rem(&den);
            out.push(q);
            num = den;
            den = r;
        }
        out
    }

    #[test]
    fn small_expansions() {
        assert_eq!(period_of(2), (1, vec![2]));
        assert_eq!(period_of(22), (4, vec![1, 2, 4, 2, 1, 8]));
        assert_eq!(period_of(57), (7, vec![1, 1, 4, 1, 1, 14]));
        assert_eq!(period_of(43), (6, vec![1, 1, 3, 1, 5, 1, 3, 1, 1, 12]));
        assert_eq!(period_of(7), (2, vec![1, 1, 1, 4]));
    }

    #[test]
    fn expansions_agree_with_euclid_oracle() {
        for f in [2i64, 7, 22, 43, 57, 94, 151, 661, 991] {
            let e = expand_sqrt(&f).unwrap();
            let oracle = euclid_oracle(f, 400);
            // denominators stay far below 2^200 over the first 40 terms, so the
            // truncation cannot disturb them
            for (k, q) in oracle.iter().take(40).enumerate() {
                assert_eq!(BigInt::from(*e.quotient(k)), *q, "f={f} k={k}");
            }
        }
    }

    #[test]
    fn rejects_squares_and_small() {
        assert_eq!(expand_sqrt(&49i64), Err(Error::PerfectSquare("49".into())));
        assert!(matches!(expand_sqrt(&1i64), Err(Error::Domain(_))));
        assert!(matches!(expand_sqrt(&-3i64), Err(Error::Domain(_))));
    }

    #[test]
    fn bounded_expansion_gives_up() {
        assert_eq!(expand_sqrt_bounded(&43i64, 9).unwrap(), None);
        assert!(expand_sqrt_bounded(&43i64, 10).unwrap().is_some());
    }

    #[test]
    fn convergents_of_57() {
        let pairs = convergents(&7i64, &[1, 1, 4, 1, 1], 5).unwrap();
        let a: Vec<_> = pairs.iter().map(|p| p.a).collect();
        let b: Vec<_> = pairs.iter().map(|p| p.b).collect();
        assert_eq!(a, vec![7, 8, 15, 68, 83, 151]);
        assert_eq!(b, vec![1, 1, 2, 9, 11, 20]);
        assert_eq!(convergents(&1i64, &[2], 1).unwrap()[1], ConvergentPair { index: 1, a: 3, b: 2 });
        assert_eq!(
            convergents(&7i64, &[1, 1, 4, 1, 1], 6),
            Err(Error::Index { requested: 6, available: 6 })
        );
    }

    #[test]
    fn reversal_values() {
        assert_eq!(reversed_value(&[1i64, 2, 2]).unwrap(), Ratio::new(7, 3));
        assert_eq!(reversed_value(&[1i64, 1, 1]).unwrap(), Ratio::new(3, 2));
        assert_eq!(reversed_value(&[5i64]).unwrap(), Ratio::from_integer(5));
        assert!(matches!(reversed_value::<i64>(&[]), Err(Error::Domain(_))));
        assert!(matches!(reversed_value(&[1i64, 0, 2]), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_recovers_root() {
        // the tail equals 1 / (√f − a0) = (a0 + √f) / (f − a0²)
        for f in [2i64, 3, 22, 43, 57, 94, 1000] {
            let e = expand_sqrt(&f).unwrap();
            let a0 = *e.a0();
            assert_eq!(e.periodic_tail(), (a0, 1, f - a0 * a0), "f={f}");
        }
    }

    #[test]
    fn report_for_22() {
        let rep = identity_report(&22i64).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.failures().collect::<Vec<_>>());
        let names: Vec<_> = rep.lines.iter().map(|l| l.name).collect();
        assert!(names.contains(&"h A_(m-1) = (c-1) B_(m-1)"));
        assert!(names.contains(&"A_(m-1) = B_m + B_(m-2)"));
        assert!(names.contains(&"c - 1 = A_(m-1)(B_m + B_(m-2))"));
        assert!(!names.contains(&"odd-period doubling"));
    }

    #[test]
    fn report_for_2_and_57() {
        let rep = identity_report(&2i64).unwrap();
        assert!(rep.all_hold());
        let line = rep.lines.iter().find(|l| l.name == "odd-period doubling").unwrap();
        assert_eq!(line.detail, "2A_n^2 + 1 = 3, 2 A_n B_n = 2");

        let rep = identity_report(&57i64).unwrap();
        assert!(rep.all_hold());
        let line = rep.lines.iter().find(|l| l.name == "even-period half formula").unwrap();
        assert!(line.detail.starts_with("A_m B_(m-1) + A_(m-1) B_(m-2) = 151"));
    }

    proptest! {
        #[test]
        fn side_sequences_are_consistent(f in 2u32..200_000) {
            let f = f as i64;
            prop_assume!(exact_sqrt(&f).is_none());
            let e = expand_sqrt(&f).unwrap();
            prop_assert_eq!(*e.period().last().unwrap(), 2 * e.a0());
            prop_assert!(e.is_palindromic());
            for k in 0..e.period_length() {
                prop_assert_eq!(e.s(k + 1) * e.s(k), f - e.r(k + 1) * e.r(k + 1));
                prop_assert!(e.r(k) <= e.a0());
            }
        }

        #[test]
        fn determinant_identity(qs in proptest::collection::vec(1i64..50, 1..12)) {
            let t = ConvergentTable::build(qs.iter().copied().map(BigInt::from));
            for i in 0..=t.last_index() {
                let det = t.a(i) * t.b(i - 1) - t.a(i - 1) * t.b(i);
                prop_assert_eq!(det, neg_one_pow::<BigInt>(i - 1));
                if i >= 2 {
                    prop_assert!(t.b(i) > t.b(i - 1));
                }
            }
        }
    }
}
