//! Complete factorization of positive integers.
//!
//! Values below 2^64 go through `num_prime`, whose primality test is
//! deterministic in that range. Larger values use trial division, a
//! Baillie-PSW probable-prime test and Pollard-Brent splitting driven by an
//! explicit seed. Every factorization is re-multiplied before it is returned.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TRIAL_LIMIT: u64 = 1 << 12;

/// Primes `p ≤ bound`, by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Prime factorization of `n ≥ 1` as `(prime, exponent)` pairs in increasing
/// order. `seed` only affects which splitting attempts run, never the result.
pub fn factorize(n: &BigUint, seed: u64) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let map: BTreeMap<BigUint, u32> = match n.to_u64() {
        Some(small) => factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect(),
        None => factorize_big(n, seed),
    };
    let product = map
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
    assert_eq!(&product, n, "factorization does not multiply back");
    map.into_iter().collect()
}

/// Factorization of a machine word.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let out: Vec<(u64, u32)> = num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect();
    debug_assert_eq!(out.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
    out
}

/// Smallest prime whose square divides `n`, if any.
pub fn square_witness(n: &BigUint, seed: u64) -> Option<BigUint> {
    if let Some(small) = n.to_u64() {
        return square_witness_u64(small).map(BigUint::from);
    }
    factorize(n, seed)
        .into_iter()
        .find(|(_, e)| *e >= 2)
        .map(|(p, _)| p)
}

pub fn square_witness_u64(n: u64) -> Option<u64> {
    factorize_u64(n).into_iter().find(|&(_, e)| e >= 2).map(|(p, _)| p)
}

pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => num_prime::nt_funcs::is_prime64(small),
        None => num_prime::nt_funcs::is_prime(n, None).probably(),
    }
}

fn factorize_big(n: &BigUint, seed: u64) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    for p in primes_up_to(TRIAL_LIMIT) {
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            *out.entry(bp.clone()).or_insert(0) += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factorize_u64(small) {
                *out.entry(BigUint::from(p)).or_insert(0) += e;
            }
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_brent(&m, &mut rng);
        stack.push(&m / &d);
        stack.push(d);
    }
    out
}

/// A nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: &BigUint, rng: &mut StdRng) -> BigUint {
    let one = BigUint::one();
    let step = |y: &BigUint, c: &BigUint| (y * y + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    loop {
        let c = BigUint::from(rng.gen::<u64>()) % n + 1u32;
        let mut y = BigUint::from(rng.gen::<u64>()) % n;
        let block = 128u64;
        let (mut r, mut q, mut g) = (1u64, one.clone(), one.clone());
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y, &c);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..block.min(r - k) {
                    y = step(&y, &c);
                    q = (q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += block;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = step(&ys, &c);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(10_000).len(), 1229);
    }

    #[test]
    fn word_sized() {
        assert_eq!(factorize_u64(7866), vec![(2, 1), (3, 2), (19, 1), (23, 1)]);
        assert_eq!(square_witness_u64(7866), Some(3));
        assert_eq!(square_witness_u64(282_234_512_826_670), None);
        assert_eq!(factorize_u64(1), vec![]);
    }

    #[test]
    fn beyond_a_word() {
        // (2^61 - 1)(2^31 - 1)^2 · 3
        let m61 = big("2305843009213693951");
        let m31 = big("2147483647");
        let n = &m61 * &m31 * &m31 * 3u32;
        let f = factorize(&n, 7);
        assert_eq!(f, vec![(BigUint::from(3u32), 1), (m31.clone(), 2), (m61.clone(), 1)]);
        assert_eq!(square_witness(&n, 1), Some(m31));
        // product of two 40-bit primes times a 64-bit prime
        let p = big("1099511627791");
        let q = big("1099511628401");
        let r = big("18446744073709551557");
        let f = factorize(&(&p * &q * &r), 3);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|(p, e)| *e == 1 && is_prime(p)));
    }

    proptest! {
        #[test]
        fn factors_multiply_back(n in 1u64..u64::MAX, k in 1u64..1_000_000, seed: u64) {
            let v = BigUint::from(n) * BigUint::from(k);
            let f = factorize(&v, seed);
            prop_assert!(f.iter().all(|(p, _)| is_prime(p)));
            prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            let prod = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            prop_assert_eq!(prod, v);
        }
    }
}
