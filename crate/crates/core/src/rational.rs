//! Exact rational arithmetic: binomials, Bernoulli numbers and polynomials,
//! zeta values at non-positive integers and rising factorials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

pub use num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`; panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `n!/(k!(n-k)!)` for `0 <= k <= n`, zero otherwise.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Falling-factorial binomial `x(x-1)...(x-k+1)/k!` at a rational point.
pub fn binomial_poly(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - rat(i as i64);
        acc /= rat(i as i64 + 1);
    }
    acc
}

/// `x(x+1)...(x+k-1)`; the empty product is 1.
pub fn rising_factorial(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x + rat(i as i64);
    }
    acc
}

/// Memoized Bernoulli numbers with `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: vec![BigRational::one()],
        }
    }

    /// Table holding `B_0..=B_max`.
    pub fn with_max(max: usize) -> Self {
        let mut t = Self::new();
        t.extend_to(max);
        t
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Extends the table through `B_max` using
    /// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
    ///
    /// Every denominator of `B_j` for `j <= m` divides the product of primes
    /// up to `m + 1`, so the sum is accumulated over that common denominator
    /// and reduced once.
    pub fn extend_to(&mut self, max: usize) {
        while self.values.len() <= max {
            let m = self.values.len();
            if m >= 3 && m % 2 == 1 {
                self.values.push(BigRational::zero());
                continue;
            }
            let d = primorial(m as u64 + 1);
            let mut c = BigInt::one();
            let mut numer = BigInt::zero();
            for (j, b) in self.values.iter().enumerate() {
                if !b.is_zero() {
                    numer += &c * b.numer() * (&d / b.denom());
                }
                c = c * (m + 1 - j) / (j + 1);
            }
            self.values.push(BigRational::new(-numer, d * BigInt::from(m + 1)));
        }
    }

    pub fn get(&mut self, k: usize) -> BigRational {
        self.extend_to(k);
        self.values[k].clone()
    }
}

fn primorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        if crate::modular::is_prime(k) {
            acc *= k;
        }
    }
    acc
}

/// `B_0..=B_max` from tangent numbers (integer additions only), an
/// independent route to the recurrence. Uses
/// `B_{2n} = (-1)^(n-1) 2n T_n / (4^n (4^n - 1))`.
pub fn bernoulli_tangent(max: usize) -> Vec<BigRational> {
    let n = max / 2;
    // T[k] ends as the k-th tangent number (Brent–Harvey).
    let mut t: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    if n >= 1 {
        t[1] = BigInt::one();
    }
    for k in 2..=n {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=n {
        for j in k..=n {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    let mut out = vec![BigRational::zero(); max + 1];
    out[0] = BigRational::one();
    if max >= 1 {
        out[1] = ratio(-1, 2);
    }
    for k in 1..=n {
        let four = num_traits::pow(BigInt::from(4), k);
        let b = BigRational::new(&t[k] * (2 * k), &four * (&four - 1));
        out[2 * k] = if k % 2 == 1 { b } else { -b };
    }
    out
}

static BERNOULLI: Mutex<Option<BernoulliTable>> = Mutex::new(None);

/// `B_k` from `t/(e^t - 1) = sum B_k t^k / k!`, served from a process-wide cache.
pub fn bernoulli(k: usize) -> BigRational {
    let mut guard = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    guard.get_or_insert_with(BernoulliTable::new).get(k)
}

/// Copies of `B_0..=B_max` from the shared cache.
pub fn bernoulli_range(max: usize) -> Vec<BigRational> {
    let mut guard = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    let table = guard.get_or_insert_with(BernoulliTable::new);
    table.extend_to(max);
    table.values()[..=max].to_vec()
}

/// `zeta(-m) = (-1)^m B_{m+1}/(m+1)`.
pub fn zeta_neg(m: u64) -> BigRational {
    let b = bernoulli(m as usize + 1) / rat(m as i64 + 1);
    if m.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// `zeta(1-k) = -B_k/k` for `k >= 2`.
pub fn zeta_one_minus(k: u64) -> Result<BigRational> {
    if k < 2 {
        return invalid(format!("zeta_one_minus needs k >= 2, got {k}"));
    }
    Ok(-bernoulli(k as usize) / rat(k as i64))
}

/// Dense polynomial with rational coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyRational {
    coeffs: Vec<BigRational>,
}

impl PolyRational {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyRational { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        PolyRational { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `P(t + c)` as a polynomial in `t`.
    pub fn taylor_shift(&self, c: &BigRational) -> Self {
        // Horner in the shifted variable.
        let lin = PolyRational::new(vec![c.clone(), BigRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(PolyRational::zero(), |acc, a| &(&acc * &lin) + &Self::constant(a.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &PolyRational {
    type Output = PolyRational;
    fn add(self, rhs: &PolyRational) -> PolyRational {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyRational::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolyRational {
    type Output = PolyRational;
    fn sub(self, rhs: &PolyRational) -> PolyRational {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyRational::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &PolyRational {
    type Output = PolyRational;
    fn mul(self, rhs: &PolyRational) -> PolyRational {
        if self.is_zero() || rhs.is_zero() {
            return PolyRational::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyRational::new(out)
    }
}

impl Neg for &PolyRational {
    type Output = PolyRational;
    fn neg(self) -> PolyRational {
        PolyRational::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for PolyRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `B_k(x) = sum_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_polynomial(k: usize) -> PolyRational {
    let b = bernoulli_range(k);
    let mut coeffs = vec![BigRational::zero(); k + 1];
    for (j, bj) in b.iter().enumerate() {
        coeffs[k - j] = bj * int_rat(binomial(k as u64, j as i64));
    }
    PolyRational::new(coeffs)
}

/// `v_p(n)` for nonzero `n`.
pub fn valuation_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let pb = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`, or `None` when `x = 0`.
pub fn valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(valuation_int(x.numer(), p) as i64 - valuation_int(x.denom(), p) as i64)
}

/// True when the denominator of `x` is prime to `p`.
pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    !x.denom().is_multiple_of(&BigInt::from(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(4, 9), BigInt::from(0));
        assert_eq!(binomial(4, -1), BigInt::from(0));
    }

    #[test]
    fn binomial_poly_examples() {
        assert_eq!(binomial_poly(&rat(-1), 2), rat(1));
        assert_eq!(binomial_poly(&ratio(7, 3), 0), rat(1));
        assert_eq!(binomial_poly(&rat(3), 2), rat(3));
        for n in 0..12u64 {
            for k in 0..14u64 {
                assert_eq!(binomial_poly(&rat(n as i64), k), int_rat(binomial(n, k as i64)));
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
        assert_eq!(bernoulli(13), rat(0));
    }

    #[test]
    fn fresh_table_matches_cache() {
        let fresh = BernoulliTable::with_max(60);
        assert_eq!(fresh.values(), &bernoulli_range(60)[..]);
        assert_eq!(fresh.max_index(), 60);
    }

    #[test]
    fn tangent_route_agrees() {
        assert_eq!(bernoulli_tangent(120), bernoulli_range(120));
        assert_eq!(bernoulli_tangent(0), vec![rat(1)]);
    }

    #[test]
    fn bernoulli_polynomial_examples() {
        assert_eq!(bernoulli_polynomial(0), PolyRational::from_ints(&[1]));
        assert_eq!(
            bernoulli_polynomial(1),
            PolyRational::new(vec![ratio(-1, 2), rat(1)])
        );
        assert_eq!(
            bernoulli_polynomial(2),
            PolyRational::new(vec![ratio(1, 6), rat(-1), rat(1)])
        );
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(0), ratio(-1, 2));
        assert_eq!(zeta_neg(1), ratio(-1, 12));
        assert_eq!(zeta_neg(2), rat(0));
        assert_eq!(zeta_one_minus(2).unwrap(), ratio(-1, 12));
        assert_eq!(zeta_one_minus(4).unwrap(), ratio(1, 120));
        assert_eq!(zeta_one_minus(3).unwrap(), rat(0));
        assert!(zeta_one_minus(1).is_err());
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&ratio(1, 2), 2), ratio(3, 4));
        assert_eq!(rising_factorial(&ratio(5, 7), 0), rat(1));
        assert_eq!(rising_factorial(&rat(3), 3), rat(60));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = PolyRational::from_ints(&[3, -2, 0, 5]);
        let c = ratio(2, 3);
        let shifted = p.taylor_shift(&c);
        for x in -3..4 {
            let x = rat(x);
            assert_eq!(shifted.eval(&x), p.eval(&(&x + &c)));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&ratio(50, 3), 5), Some(2));
        assert_eq!(valuation(&ratio(1, 75), 5), Some(-2));
        assert_eq!(valuation(&rat(0), 5), None);
        assert!(is_p_integral(&ratio(1, 3), 5));
        assert!(!is_p_integral(&ratio(1, 10), 5));
    }
}
