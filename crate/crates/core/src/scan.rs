//! Squarefree density of polynomial values over a range of `t`.
//!
//! Each `t` whose value is divisible by `p²` for some prime `p ≤ B` is
//! struck out by a sieve driven by the roots of the polynomial modulo `p²`.
//! Every survivor is then factored completely, so the sieve bound changes
//! running time and never the answer.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{self, primes_up_to};
use crate::IntPoly;

pub const DEFAULT_SIEVE_BOUND: u64 = 10_000;
/// Number of failing `t` kept in a report, smallest first.
pub const FAILURE_SAMPLE: usize = 16;
const CHUNK: u64 = 1 << 15;

/// Which `t` in the range are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TFilter {
    #[default]
    All,
    Even,
    Odd,
    /// `t ≡ 0 (mod 4)`.
    Mod4,
}

impl TFilter {
    pub fn admits(self, t: u64) -> bool {
        match self {
            TFilter::All => true,
            TFilter::Even => t.is_multiple_of(2),
            TFilter::Odd => t % 2 == 1,
            TFilter::Mod4 => t.is_multiple_of(4),
        }
    }
}

impl fmt::Display for TFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TFilter::All => "all",
            TFilter::Even => "even",
            TFilter::Odd => "odd",
            TFilter::Mod4 => "mod4",
        })
    }
}

impl FromStr for TFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(TFilter::All),
            "even" => Ok(TFilter::Even),
            "odd" => Ok(TFilter::Odd),
            "mod4" => Ok(TFilter::Mod4),
            _ => Err(Error::Domain(format!("unknown t filter {s:?} (all, even, odd, mod4)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSpec {
    /// Integer polynomial of degree at most 4, positive on the range.
    pub poly: IntPoly,
    pub t_lo: u64,
    /// Inclusive.
    pub t_hi: u64,
    pub filter: TFilter,
    pub sieve_bound: u64,
    pub seed: u64,
}

impl ScanSpec {
    pub fn new(poly: IntPoly, t_lo: u64, t_hi: u64) -> Self {
        ScanSpec {
            poly,
            t_lo,
            t_hi,
            filter: TFilter::All,
            sieve_bound: DEFAULT_SIEVE_BOUND,
            seed: crate::quadfield::DEFAULT_SEED,
        }
    }

    pub fn with_filter(mut self, filter: TFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn with_sieve_bound(mut self, bound: u64) -> Self {
        self.sieve_bound = bound;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.t_lo > self.t_hi {
            return Err(Error::Domain(format!("empty range {}:{}", self.t_lo, self.t_hi)));
        }
        match self.poly.degree() {
            Some(d) if d <= 4 => {}
            _ => return Err(Error::Domain(format!("scan needs a nonzero polynomial of degree <= 4, got {}", self.poly))),
        }
        if self.sieve_bound < 2 {
            return Err(Error::Domain("sieve bound must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanReport {
    pub total: u64,
    pub squarefree_count: u64,
    /// Smallest failing `t` with the smallest prime whose square divides the value.
    pub first_failures: Vec<(u64, BigInt)>,
    pub largest_squarefree_t: Option<u64>,
}

impl ScanReport {
    /// Combines reports of disjoint ranges; the result does not depend on order.
    pub fn merge(mut self, other: ScanReport) -> ScanReport {
        self.total += other.total;
        self.squarefree_count += other.squarefree_count;
        self.first_failures.extend(other.first_failures);
        self.first_failures.sort_by_key(|(t, _)| *t);
        self.first_failures.truncate(FAILURE_SAMPLE);
        self.largest_squarefree_t = self.largest_squarefree_t.max(other.largest_squarefree_t);
        self
    }

    pub fn density(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.squarefree_count as f64 / self.total as f64
        }
    }

    fn record(&mut self, t: u64, witness: Option<BigInt>) {
        self.total += 1;
        match witness {
            None => {
                self.squarefree_count += 1;
                self.largest_squarefree_t = Some(t);
            }
            Some(p) if self.first_failures.len() < FAILURE_SAMPLE => self.first_failures.push((t, p)),
            Some(_) => {}
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo the prime `p`.
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Square root of `a` modulo an odd prime by Tonelli-Shanks.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

fn reduce(poly: &IntPoly, m: u64) -> Vec<u64> {
    let bm = BigInt::from(m);
    poly.coeffs()
        .iter()
        .map(|c| c.mod_floor(&bm).to_u64().expect("residue fits"))
        .collect()
}

fn eval_mod(c: &[u64], t: u64, m: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &k| (mul_mod(acc, t, m) + k) % m)
}

fn derivative_mod(c: &[u64], t: u64, m: u64) -> u64 {
    let d: Vec<u64> = c.iter().enumerate().skip(1).map(|(k, &x)| mul_mod(x, k as u64, m)).collect();
    eval_mod(&d, t, m)
}

/// Roots modulo the odd prime `p` of a polynomial already reduced mod `p`.
fn roots_mod_prime(c: &[u64], p: u64) -> Vec<u64> {
    let mut c = c.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    let mut out = match c.len() {
        0 => (0..p).collect(),
        1 => Vec::new(),
        2 => vec![mul_mod(p - c[0], inv_mod(c[1], p), p)],
        3 => {
            let disc = (mul_mod(c[1], c[1], p) + p - mul_mod(4 % p, mul_mod(c[2], c[0], p), p)) % p;
            match sqrt_mod(disc, p) {
                None => Vec::new(),
                Some(r) => {
                    let inv2a = inv_mod(mul_mod(2, c[2], p), p);
                    let minus_b = (p - c[1]) % p;
                    vec![mul_mod((minus_b + r) % p, inv2a, p), mul_mod((minus_b + p - r) % p, inv2a, p)]
                }
            }
        }
        _ => (0..p).filter(|&t| eval_mod(&c, t, p) == 0).collect(),
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// All `t mod p^e` with `poly(t) ≡ 0`, for an odd prime `p` and `e ∈ {1, 2}`.
pub fn quadratic_congruence_roots(poly: &IntPoly, p: u64, e: u32) -> Result<Vec<u64>> {
    if p == 2 {
        return Err(Error::Domain("p = 2 goes through two_adic_roots".into()));
    }
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p > u32::MAX as u64 {
        return Err(Error::Domain(format!("modulus {p}^2 does not fit a machine word")));
    }
    let base = reduce(poly, p);
    let roots = roots_mod_prime(&base, p);
    match e {
        1 => Ok(roots),
        2 => Ok(lift_to_square(poly, p, &roots)),
        _ => Err(Error::Domain(format!("exponent {e} not supported (1 or 2)"))),
    }
}

fn lift_to_square(poly: &IntPoly, p: u64, roots_p: &[u64]) -> Vec<u64> {
    let m = p * p;
    let full = reduce(poly, m);
    if full.iter().all(|c| c % p == 0) {
        // poly = p·g, and p² | poly(t) exactly when p | g(t)
        let g: Vec<u64> = full.iter().map(|c| c / p).collect();
        return roots_mod_prime(&g, p)
            .into_iter()
            .flat_map(|r| (0..p).map(move |k| r + k * p))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
    }
    let mut out = Vec::new();
    for &r in roots_p {
        let dr = derivative_mod(&full, r, p);
        if dr != 0 {
            let q = eval_mod(&full, r, m) / p;
            let k = mul_mod((p - q % p) % p, inv_mod(dr, p), p);
            out.push(r + k * p);
        } else {
            out.extend((0..p).map(|k| r + k * p).filter(|&t| eval_mod(&full, t, m) == 0));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All `t mod 4` with `poly(t) ≡ 0 (mod 4)`, by enumeration.
pub fn two_adic_roots(poly: &IntPoly) -> Vec<u64> {
    let c = reduce(poly, 4);
    (0..4).filter(|&t| eval_mod(&c, t, 4) == 0).collect()
}

/// `(p, p², roots mod p²)` for every prime up to the bound.
struct SieveTable(Vec<(u64, u64, Vec<u64>)>);

impl SieveTable {
    fn build(poly: &IntPoly, bound: u64) -> Result<Self> {
        let mut rows = Vec::new();
        for p in primes_up_to(bound) {
            let roots = if p == 2 { two_adic_roots(poly) } else { quadratic_congruence_roots(poly, p, 2)? };
            if !roots.is_empty() {
                rows.push((p, p * p, roots));
            }
        }
        Ok(SieveTable(rows))
    }

    /// Smallest sieving prime whose square divides `poly(t)`, for `t ∈ [lo, hi]`.
    fn mark(&self, lo: u64, hi: u64) -> Vec<u32> {
        let mut witness = vec![0u32; (hi - lo + 1) as usize];
        for (p, m, roots) in &self.0 {
            for &r in roots {
                let mut t = lo + (r + m - lo % m) % m;
                while t <= hi {
                    let slot = &mut witness[(t - lo) as usize];
                    if *slot == 0 {
                        *slot = *p as u32;
                    }
                    t += m;
                }
            }
        }
        witness
    }
}

/// For each `t` in `[t_lo, t_hi]` (ignoring the filter), the smallest prime
/// `p ≤ B` with `p² | poly(t)`.
pub fn sieve_squarefree_range(spec: &ScanSpec) -> Result<Vec<Option<u64>>> {
    spec.validate()?;
    let table = SieveTable::build(&spec.poly, spec.sieve_bound)?;
    Ok(table
        .mark(spec.t_lo, spec.t_hi)
        .into_iter()
        .map(|w| (w != 0).then_some(w as u64))
        .collect())
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub t: u64,
    pub value: BigInt,
    pub witness: Option<BigInt>,
}

fn scan_chunk(spec: &ScanSpec, table: &SieveTable, lo: u64, hi: u64, keep_rows: bool) -> Result<(ScanReport, Vec<ScanRow>)> {
    let marks = table.mark(lo, hi);
    let mut report = ScanReport::default();
    let mut rows = Vec::new();
    for t in lo..=hi {
        if !spec.filter.admits(t) {
            continue;
        }
        let value = spec.poly.eval(&BigInt::from(t));
        if !value.is_positive() {
            return Err(Error::Domain(format!("poly({t}) = {value} is not positive")));
        }
        let mark = marks[(t - lo) as usize];
        let witness = if mark != 0 {
            Some(BigInt::from(mark))
        } else {
            let mag: BigUint = value.magnitude().clone();
            match mag.to_u64() {
                Some(v) => factor::square_witness_u64(v).map(BigInt::from),
                None => factor::square_witness(&mag, spec.seed ^ t).map(BigInt::from),
            }
        };
        if keep_rows {
            rows.push(ScanRow { t, value, witness: witness.clone() });
        }
        report.record(t, witness);
    }
    Ok((report, rows))
}

fn chunks(spec: &ScanSpec) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = spec.t_lo;
    loop {
        let hi = lo.saturating_add(CHUNK - 1).min(spec.t_hi);
        out.push((lo, hi));
        if hi == spec.t_hi {
            return out;
        }
        lo = hi + 1;
    }
}

/// Exact count of `t` in the range (after the filter) with squarefree value.
pub fn density_scan(spec: &ScanSpec) -> Result<ScanReport> {
    spec.validate()?;
    let table = SieveTable::build(&spec.poly, spec.sieve_bound)?;
    chunks(spec)
        .into_par_iter()
        .map(|(lo, hi)| scan_chunk(spec, &table, lo, hi, false).map(|(r, _)| r))
        .try_reduce(ScanReport::default, |a, b| Ok(a.merge(b)))
}

/// [`density_scan`] that also writes `t,value,squarefree,witness` rows, in
/// increasing `t`, to `out`.
pub fn density_scan_csv<W: Write>(spec: &ScanSpec, out: W) -> Result<ScanReport> {
    spec.validate()?;
    let table = SieveTable::build(&spec.poly, spec.sieve_bound)?;
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Domain(format!("csv output failed: {e}"));
    writer.write_record(["t", "value", "squarefree", "witness"]).map_err(io)?;
    let mut report = ScanReport::default();
    let all = chunks(spec);
    for batch in all.chunks(rayon::current_num_threads().max(1) * 4) {
        let results: Vec<_> = batch
            .par_iter()
            .map(|&(lo, hi)| scan_chunk(spec, &table, lo, hi, true))
            .collect::<Result<_>>()?;
        for (part, rows) in results {
            for row in rows {
                let witness = row.witness.as_ref().map(ToString::to_string).unwrap_or_default();
                let sf = if row.witness.is_none() { "1" } else { "0" };
                writer
                    .write_record([row.t.to_string(), row.value.to_string(), sf.to_string(), witness])
                    .map_err(io)?;
            }
            report = report.merge(part);
        }
    }
    writer.flush().map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    Ok(report)
}
