//! Small number-theoretic helpers shared by every module.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn prime_cache() -> &'static RwLock<Vec<u64>> {
    static CACHE: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![2, 3, 5, 7, 11, 13]))
}

/// The `n`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    {
        let cache = prime_cache().read().unwrap();
        if let Some(&p) = cache.get(n - 1) {
            return p;
        }
    }
    let mut cache = prime_cache().write().unwrap();
    let mut cand = *cache.last().unwrap() + 2;
    while cache.len() < n {
        if is_prime(cand) {
            cache.push(cand);
        }
        cand += 2;
    }
    cache[n - 1]
}

/// 1-based position of `p` in the sequence of all primes, if `p` is prime.
pub fn prime_position(p: u64) -> Option<usize> {
    if !is_prime(p) {
        return None;
    }
    let mut i = 1;
    loop {
        let q = nth_prime(i);
        if q == p {
            return Some(i);
        }
        if q > p {
            return None;
        }
        i += 1;
    }
}

/// Distinct prime divisors of `n` in increasing order; `n = 0` has none by convention.
pub fn prime_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let mut m: u64 = n.abs().try_into().ok()?;
    let mut out = Vec::new();
    if m == 0 {
        return Some(out);
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    Some(out)
}

pub fn pow_big(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Exponent of `p` in `n` (n must be nonzero).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Inverse of `a` modulo `m`, or `None` when they are not coprime.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let got: Vec<u64> = (1..=10).map(nth_prime).collect();
        assert_eq!(got, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(nth_prime(20), 71);
        assert_eq!(prime_position(71), Some(20));
        assert_eq!(prime_position(9), None);
    }

    #[test]
    fn divisors_and_inverse() {
        assert_eq!(prime_divisors(&BigInt::from(-60)), Some(vec![2, 3, 5]));
        assert_eq!(prime_divisors(&BigInt::from(1)), Some(vec![]));
        assert_eq!(
            mod_inverse(&BigInt::from(3), &BigInt::from(5)),
            Some(BigInt::from(2))
        );
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(9)), None);
        assert_eq!(valuation(&BigInt::from(40), 2), 3);
    }
}
