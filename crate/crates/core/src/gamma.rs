//! Morita's p-adic gamma function on the naturals, its functional equation
//! and continuity, closed-form modular inverses, and the exclusion search
//! behind the triviality of `S(p,q)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::modular::{euclid_steps, mod_floor, mod_inv, pow_i, pow_u, require_prime, to_bigint};

fn require_odd_prime(p: u64) -> Result<()> {
    require_prime(p)?;
    if p == 2 {
        return invalid("the Morita gamma function is only provided for odd p");
    }
    Ok(())
}

/// Cache of `Γ_p(n) = (-1)^n prod_{1<=j<n, p∤j} j` as exact integers.
#[derive(Debug, Clone)]
pub struct RestrictedFactorial {
    p: u64,
    values: Vec<BigInt>,
}

impl RestrictedFactorial {
    pub fn new(p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        Ok(RestrictedFactorial { p, values: vec![BigInt::one()] })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn extend_to(&mut self, n: u64) {
        while self.values.len() as u64 <= n {
            let k = self.values.len() as u64 - 1;
            let next = &self.values[k as usize] * gamma_functional_step(k, self.p);
            self.values.push(next);
        }
    }

    pub fn get(&mut self, n: u64) -> BigInt {
        self.extend_to(n);
        self.values[n as usize].clone()
    }

    /// `Γ_p(0..=n)` as exact integers.
    pub fn range(&mut self, n: u64) -> &[BigInt] {
        self.extend_to(n);
        &self.values[..=n as usize]
    }
}

/// `Γ_p(n)` straight from the product definition.
pub fn morita_gamma_exact(n: u64, p: u64) -> Result<BigInt> {
    require_odd_prime(p)?;
    let mut acc = BigInt::one();
    for j in 1..n {
        if j % p != 0 {
            acc *= j;
        }
    }
    Ok(if n.is_multiple_of(2) { acc } else { -acc })
}

/// `Γ_p(n) mod p^s`, computed without leaving `Z / p^s`.
pub fn morita_gamma(n: u64, p: u64, s: u32) -> Result<BigUint> {
    require_odd_prime(p)?;
    let m = pow_u(p, s);
    let mut acc = BigUint::one() % &m;
    for j in 1..n {
        if j % p != 0 {
            acc = (acc * j) % &m;
        }
    }
    if n % 2 == 1 {
        acc = (&m - acc) % &m;
    }
    Ok(acc)
}

/// `h_p(n)` with `Γ_p(n+1) = h_p(n) Γ_p(n)`.
pub fn gamma_functional_step(n: u64, p: u64) -> i64 {
    if n.is_multiple_of(p) {
        -1
    } else {
        -(n as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    pub p: u64,
    pub s: u32,
    pub window: u64,
    pub checked: u64,
    /// `n` with `a_{n+p^s} != -a_n mod p^s` for `a_n = prod_{k<n} k` over the
    /// chosen index set.
    pub product_failures: Vec<u64>,
    /// `n` with `Γ_p(n + p^s) != Γ_p(n) mod p^s`.
    pub gamma_failures: Vec<u64>,
}

impl ContinuityReport {
    pub fn passed(&self) -> bool {
        self.product_failures.is_empty() && self.gamma_failures.is_empty()
    }
}

/// Checks `a_{n+p^s} = -a_n mod p^s` and `Γ_p(n+p^s) = Γ_p(n) mod p^s` for `n <= L`.
/// With `restricted = false` the product runs over every `k`, which should fail.
pub fn gamma_continuity_check(p: u64, s: u32, window: u64, restricted: bool) -> Result<ContinuityReport> {
    require_odd_prime(p)?;
    let ps = p.pow(s);
    let m = pow_u(p, s);
    let top = window + ps;
    let mut prods = Vec::with_capacity(top as usize + 1);
    let mut acc = BigUint::one() % &m;
    prods.push(acc.clone());
    for k in 1..=top {
        if !restricted || k % p != 0 {
            acc = (acc * k) % &m;
        }
        prods.push(acc.clone());
    }
    let neg = |x: &BigUint| (&m - x) % &m;
    let signed = |n: u64| if n.is_multiple_of(2) { prods[n as usize].clone() } else { neg(&prods[n as usize]) };
    let mut product_failures = Vec::new();
    let mut gamma_failures = Vec::new();
    for n in 0..=window {
        if prods[(n + ps) as usize] != neg(&prods[n as usize]) {
            product_failures.push(n);
        }
        if signed(n + ps) != signed(n) {
            gamma_failures.push(n);
        }
    }
    Ok(ContinuityReport { p, s, window, checked: window + 1, product_failures, gamma_failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfInverse {
    pub x: BigUint,
    /// Largest `n` with `n r < s`.
    pub n: u32,
    /// Division steps Euclid takes on `((p^r+1)/2, p^s)`.
    pub euclid_steps: u32,
}

impl HalfInverse {
    pub fn parity_matches_euclid(&self) -> bool {
        self.n % 2 == self.euclid_steps % 2
    }
}

/// Inverse of `(p^r + 1)/2` modulo `p^s` from the alternating geometric sum.
pub fn inverse_of_half_pr_plus_one(p: u64, r: u32, s: u32) -> Result<HalfInverse> {
    require_odd_prime(p)?;
    if r == 0 || s <= r {
        return invalid(format!("need 1 <= r < s, got r={r}, s={s}"));
    }
    let n = (s - 1) / r;
    let pr = pow_i(p, r);
    let mut sum = BigInt::zero();
    let mut term = BigInt::one();
    for m in 0..=n {
        if m % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term *= &pr;
    }
    let mut x = sum * 2;
    if n % 2 == 1 {
        x += pow_i(p, s);
    }
    let modulus = pow_u(p, s);
    let x = mod_floor(&x, &modulus);
    let a = (pow_u(p, r) + 1u32) / 2u32;
    let steps = match (u64::try_from(&a), u64::try_from(&modulus)) {
        (Ok(a), Ok(m)) => euclid_steps(a, m),
        _ => 0,
    };
    Ok(HalfInverse { x, n, euclid_steps: steps })
}

/// Inverse of `(m p^r + t)/v` modulo `p^s` via
/// `v sum_l (-1)^l t_s^(l+1) (m p^r)^l`, `t_s = t^-1 mod p^s`.
pub fn inverse_general(m: u64, r: u32, t: i64, v: u64, p: u64, s: u32) -> Result<BigUint> {
    require_prime(p)?;
    if r == 0 || s <= r {
        return invalid(format!("need 1 <= r < s, got r={r}, s={s}"));
    }
    if t.rem_euclid(p as i64) == 0 {
        return invalid(format!("t = {t} must be prime to p = {p}"));
    }
    let num = BigInt::from(m) * pow_i(p, r) + BigInt::from(t);
    if v == 0 || !(&num % BigInt::from(v)).is_zero() {
        return invalid(format!("v = {v} does not divide m p^r + t = {num}"));
    }
    let modulus = pow_u(p, s);
    let ts = to_bigint(&mod_inv(&BigInt::from(t), &modulus).expect("t is a unit"));
    let mpr = BigInt::from(m) * pow_i(p, r);
    let n = (s - 1) / r;
    let mut sum = BigInt::zero();
    let mut ts_pow = ts.clone();
    let mut mpr_pow = BigInt::one();
    for l in 0..=n {
        let term = &ts_pow * &mpr_pow;
        if l % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        ts_pow = (ts_pow * &ts) % to_bigint(&modulus);
        mpr_pow *= &mpr;
    }
    Ok(mod_floor(&(sum * BigInt::from(v)), &modulus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn label(&self) -> &'static str {
        match self {
            Side::P => "p-side",
            Side::Q => "q-side",
        }
    }
}

/// An inverse residue that one of the primes divides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub side: Side,
    pub exponent: u32,
    /// The chain element whose inverse was taken.
    pub parent: u64,
    pub inverse: u64,
    pub divisor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Excluded(Witness),
    Undecided { depth: u32 },
}

impl Membership {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Membership::Excluded(w) => Some(w),
            Membership::Undecided { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// Inverses of every element met so far (the chain of inverses).
    Chain,
    /// Inverses of `j` itself only.
    Direct,
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m as i128) as u64
}

struct SideChain {
    prime: u64,
    other: u64,
    side: Side,
    seen: Vec<u64>,
}

impl SideChain {
    fn new(j: u64, prime: u64, other: u64, side: Side) -> Self {
        SideChain { prime, other, side, seen: vec![j] }
    }

    /// Adds level `r` and returns the first element divisible by `other`.
    fn level(&mut self, r: u32, mode: SearchMode) -> Option<Witness> {
        let m = self.prime.checked_pow(r)?;
        let parents: Vec<u64> = match mode {
            SearchMode::Chain => self.seen.clone(),
            SearchMode::Direct => vec![self.seen[0]],
        };
        let mut found = None;
        for parent in parents {
            let x = inv_mod(parent, m);
            if found.is_none() && x.is_multiple_of(self.other) {
                found = Some(Witness {
                    side: self.side,
                    exponent: r,
                    parent,
                    inverse: x,
                    divisor: self.other,
                });
            }
            if mode == SearchMode::Chain && !self.seen.contains(&x) {
                self.seen.push(x);
            }
        }
        found
    }
}

/// Looks for `r <= depth` where an inverse mod `p^r` in the chain is divisible
/// by `q`, then symmetrically mod `q^s` for one divisible by `p`.
pub fn s_pq_membership(j: u64, p: u64, q: u64, depth: u32, mode: SearchMode) -> Result<Membership> {
    require_prime(p)?;
    require_prime(q)?;
    if p == q {
        return invalid("S(p,q) needs distinct primes");
    }
    if j.is_multiple_of(p) || j.is_multiple_of(q) {
        return invalid(format!("j = {j} must be prime to {p} and {q}"));
    }
    if j <= 1 {
        return Ok(Membership::Undecided { depth });
    }
    let mut pc = SideChain::new(j, p, q, Side::P);
    let mut qc = SideChain::new(j, q, p, Side::Q);
    for chain in [&mut pc, &mut qc] {
        for r in 1..=depth {
            if let Some(w) = chain.level(r, mode) {
                return Ok(Membership::Excluded(w));
            }
        }
    }
    Ok(Membership::Undecided { depth })
}

/// Memoized exclusion witnesses for one prime pair and depth.
pub struct SpqCache {
    p: u64,
    q: u64,
    depth: u32,
    mode: SearchMode,
    entries: Mutex<HashMap<u64, Membership>>,
}

impl SpqCache {
    pub fn new(p: u64, q: u64, depth: u32, mode: SearchMode) -> Self {
        SpqCache { p, q, depth, mode, entries: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, j: u64) -> Result<Membership> {
        if let Some(m) = self.entries.lock().unwrap_or_else(|e| e.into_inner()).get(&j) {
            return Ok(m.clone());
        }
        let m = s_pq_membership(j, self.p, self.q, self.depth, self.mode)?;
        self.entries
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(j, m.clone());
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Multiplicative order of `p` modulo `j`: the eventual period of the base-`p`
/// digits of `1/j`.
pub fn inverse_digit_period(j: u64, p: u64) -> u32 {
    if j == 1 {
        return 1;
    }
    let mut x = p % j;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * p as u128 % j as u128) as u64;
        k += 1;
    }
    k
}

/// The exponent the periodicity argument points to, and whether the inverse
/// there is actually divisible by `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityProbe {
    pub period: u32,
    pub predicted_exponent: u32,
    pub inverse: BigUint,
    pub divisible: bool,
}

pub fn periodicity_probe(j: u64, p: u64, q: u64) -> PeriodicityProbe {
    let n = inverse_digit_period(j, p);
    let b = (pow_u(p, n) % q).iter_u64_digits().next().unwrap_or(0);
    let m = if b == 1 { q as u32 } else { q as u32 - 1 };
    let e = m * n;
    let inv = mod_inv(&BigInt::from(j), &pow_u(p, e)).expect("j prime to p");
    let divisible = (&inv % q).is_zero();
    PeriodicityProbe { period: n, predicted_exponent: e, inverse: inv, divisible }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityRow {
    pub j: u64,
    pub membership: Membership,
    pub probe: PeriodicityProbe,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityReport {
    pub p: u64,
    pub q: u64,
    pub depth: u32,
    pub rows: Vec<TrivialityRow>,
}

impl TrivialityReport {
    pub fn undecided(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.membership.witness().is_none())
            .map(|r| r.j)
            .collect()
    }

    pub fn all_excluded(&self) -> bool {
        self.undecided().is_empty()
    }
}

/// Sweeps `2 <= j <= j_bound` prime to `pq`. Never asserts membership: a `j`
/// without a witness is only undecided at this depth.
pub fn verify_triviality_theorem(p: u64, q: u64, j_bound: u64, depth: u32) -> Result<TrivialityReport> {
    let cache = SpqCache::new(p, q, depth, SearchMode::Chain);
    let mut rows = Vec::new();
    for j in 2..=j_bound {
        if j % p == 0 || j % q == 0 {
            continue;
        }
        rows.push(TrivialityRow { j, membership: cache.get(j)?, probe: periodicity_probe(j, p, q) });
    }
    Ok(TrivialityReport { p, q, depth, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        assert_eq!(morita_gamma(0, 5, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(morita_gamma(1, 5, 3).unwrap(), BigUint::from(124u32));
        assert_eq!(morita_gamma(6, 5, 2).unwrap(), BigUint::from(24u32));
        assert_eq!(morita_gamma(5, 5, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(morita_gamma_exact(5, 5).unwrap(), BigInt::from(-24));
        assert!(morita_gamma(3, 2, 2).is_err());
    }

    #[test]
    fn functional_step() {
        assert_eq!(gamma_functional_step(3, 5), -3);
        assert_eq!(gamma_functional_step(10, 5), -1);
        for p in [3, 5, 7] {
            let mut cache = RestrictedFactorial::new(p).unwrap();
            for n in 0..120 {
                assert_eq!(cache.get(n), morita_gamma_exact(n, p).unwrap());
            }
        }
    }

    #[test]
    fn continuity() {
        assert!(gamma_continuity_check(5, 1, 50, true).unwrap().passed());
        assert!(gamma_continuity_check(3, 2, 60, true).unwrap().passed());
        assert!(!gamma_continuity_check(5, 1, 50, false).unwrap().passed());
    }

    #[test]
    fn half_inverse_examples() {
        assert_eq!(inverse_of_half_pr_plus_one(3, 1, 2).unwrap().x, BigUint::from(5u32));
        assert_eq!(inverse_of_half_pr_plus_one(5, 1, 3).unwrap().x, BigUint::from(42u32));
        assert!(inverse_of_half_pr_plus_one(5, 2, 2).is_err());
    }

    #[test]
    fn general_inverse_examples() {
        for (p, r, s) in [(3, 1, 4), (5, 2, 5), (7, 1, 3)] {
            assert_eq!(
                inverse_general(1, r, 1, 2, p, s).unwrap(),
                inverse_of_half_pr_plus_one(p, r, s).unwrap().x
            );
        }
        assert_eq!(inverse_general(1, 1, 2, 1, 3, 2).unwrap(), BigUint::from(2u32));
        assert!(inverse_general(1, 1, 2, 2, 3, 2).is_err());
    }

    #[test]
    fn spq_examples() {
        let w = s_pq_membership(2, 3, 5, 4, SearchMode::Chain).unwrap();
        let w = w.witness().unwrap().clone();
        assert_eq!((w.side, w.exponent, w.inverse, w.divisor), (Side::P, 2, 5, 5));
        assert!(s_pq_membership(2, 3, 7, 4, SearchMode::Chain).unwrap().witness().is_some());
        assert_eq!(
            s_pq_membership(1, 3, 5, 8, SearchMode::Chain).unwrap(),
            Membership::Undecided { depth: 8 }
        );
    }

    #[test]
    fn chain_for_two_mod_powers_of_three() {
        let mut c = SideChain::new(2, 3, 1_000_003, Side::P);
        for r in 1..=5 {
            c.level(r, SearchMode::Chain);
        }
        let mut level4: Vec<u64> = c.seen.iter().copied().filter(|x| (28..81).contains(x)).collect();
        level4.sort();
        assert_eq!(level4, vec![29, 41, 59, 65]);
        for x in [83, 86, 122, 146, 173, 176, 191, 221] {
            assert!(c.seen.contains(&x));
        }
    }

    #[test]
    fn direct_search_misses_some_j() {
        assert!(s_pq_membership(4, 3, 5, 16, SearchMode::Direct).unwrap().witness().is_none());
        assert!(s_pq_membership(4, 3, 5, 16, SearchMode::Chain).unwrap().witness().is_some());
    }

    #[test]
    fn periods() {
        assert_eq!(inverse_digit_period(7, 3), 6);
        assert_eq!(inverse_digit_period(4, 5), 1);
    }
}
