//! Integer and modular helpers shared by the p-adic modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::BigRational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn pow_u(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

pub fn pow_i(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `v_p(n)` for `n != 0`.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n)` for `n != 0`, with the cofactor.
pub fn split_vp(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// Least non-negative residue of `a` modulo `m`.
pub fn mod_floor(a: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    a.mod_floor(&m).to_biguint().expect("mod_floor is non-negative")
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inv(a: &BigInt, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let mi = BigInt::from_biguint(Sign::Plus, m.clone());
    let e = a.mod_floor(&mi).extended_gcd(&mi);
    if !e.gcd.is_one() {
        return None;
    }
    Some(mod_floor(&e.x, m))
}

pub fn mod_inv_u64(a: u64, m: u64) -> Option<u64> {
    mod_inv(&BigInt::from(a), &BigUint::from(m)).map(|x| u64::try_from(x).expect("fits"))
}

/// Number of division steps the Euclidean algorithm takes on `(a, m)`.
pub fn euclid_steps(a: u64, m: u64) -> u32 {
    let (mut x, mut y) = (m, a % m);
    let mut steps = 0;
    while y != 0 {
        (x, y) = (y, x % y);
        steps += 1;
    }
    steps
}

/// `x mod m` for a rational whose denominator is prime to `m`.
pub fn rational_mod(x: &BigRational, m: &BigUint) -> Option<BigUint> {
    let inv = mod_inv(x.denom(), m)?;
    Some(mod_floor(&(x.numer() * BigInt::from_biguint(Sign::Plus, inv)), m))
}

/// The unique `x mod m1*m2` with `x = a1 mod m1` and `x = a2 mod m2`.
pub fn crt(a1: &BigUint, m1: &BigUint, a2: &BigUint, m2: &BigUint) -> Option<BigUint> {
    let inv = mod_inv(&BigInt::from_biguint(Sign::Plus, m1.clone()), m2)?;
    let a1i = BigInt::from_biguint(Sign::Plus, a1.clone());
    let a2i = BigInt::from_biguint(Sign::Plus, a2.clone());
    let m1i = BigInt::from_biguint(Sign::Plus, m1.clone());
    let k = mod_floor(&((a2i - &a1i) * BigInt::from_biguint(Sign::Plus, inv)), m2);
    let x = a1i + m1i * BigInt::from_biguint(Sign::Plus, k);
    Some(mod_floor(&x, &(m1 * m2)))
}

pub fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// `|x|` reduced into `u64`, or `None` if it does not fit.
pub fn small(x: &BigInt) -> Option<u64> {
    u64::try_from(x.abs()).ok()
}
