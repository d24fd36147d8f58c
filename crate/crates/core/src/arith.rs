//! Small-integer number theory shared by the rest of the crate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of a (possibly large) positive integer.
///
/// Falls back to trial division on big integers; callers only pass
/// denominators built from small factors.
pub fn prime_divisors_big(n: &BigUint) -> Vec<u64> {
    if let Some(small) = n.to_u64() {
        return factorize(small).into_iter().map(|(p, _)| p).collect();
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let db = BigUint::from(d);
        if &db * &db > n {
            break;
        }
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
            if let Some(small) = n.to_u64() {
                out.extend(
                    factorize(small)
                        .into_iter()
                        .map(|(p, _)| p)
                        .filter(|&p| p != d),
                );
                out.sort_unstable();
                out.dedup();
                return out;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        if let Some(small) = n.to_u64() {
            out.push(small);
        }
    }
    out
}

/// Ascending iterator over all primes.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Inverse of `a` modulo `m` for big integers.
pub fn mod_inverse_big(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let mut x = e.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint()
}

/// Reduce a signed big integer into `[0, m)`.
pub fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let mb = BigInt::from(m.clone());
    let r = x.mod_floor(&mb);
    r.to_biguint().expect("mod_floor is non-negative")
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation_big(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    Some(v)
}

/// `p^k` if it fits in a `u64`.
pub fn checked_prime_power(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

/// Largest `e` with `p^e <= limit`, at least 1 when `p <= limit`.
pub fn max_power_below(p: u64, limit: u128) -> u32 {
    let mut e = 0u32;
    let mut acc: u128 = 1;
    while let Some(next) = acc.checked_mul(p as u128) {
        if next > limit {
            break;
        }
        acc = next;
        e += 1;
    }
    e
}

/// `(a + b) mod m` for residues `< m`, `m < 2^127`.
#[inline]
pub fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// `(a * b) mod m` for `m < 2^127` without overflow.
pub fn mul_mod_u128(mut a: u128, mut b: u128, m: u128) -> u128 {
    a %= m;
    b %= m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

/// Signed integer `c` reduced mod `m` as a `u128` residue.
pub fn signed_mod_u128(c: i64, m: u128) -> u128 {
    let r = (c as i128).rem_euclid(m as i128);
    r as u128
}

pub fn big_pow(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}
