//! Kubota–Leopoldt branches, two-prime zeta values and branches, Kummer
//! congruence checks, the universal power function and p-q Hurwitz values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::modular::{mod_floor, mod_inv, pow_i, pow_u, require_prime, to_bigint};
use crate::padic::{angle_bracket, PadicNumber, PrimePair};
use crate::rational::{bernoulli, bernoulli_polynomial, binomial, int_rat, rat, valuation, BigRational};

fn euler_factor(p: u64, e: u64) -> BigRational {
    rat(1) - int_rat(pow_i(p, e as u32))
}

/// `ζ_p(1-n) = -(1 - p^(n-1)) B_n / n`.
pub fn kl_value(p: u64, n: u64) -> Result<BigRational> {
    require_prime(p)?;
    if n == 0 {
        return invalid("kl_value needs n >= 1");
    }
    Ok(-euler_factor(p, n - 1) * bernoulli(n as usize) / rat(n as i64))
}

/// `(1 - p^(k-1)) B_k / k`, the quantity the congruences compare.
fn kummer_term(p: u64, k: u64) -> BigRational {
    euler_factor(p, k - 1) * bernoulli(k as usize) / rat(k as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerResult {
    pub p: u64,
    pub i: u64,
    pub j: u64,
    pub n: u32,
    /// `None` when the two sides are equal.
    pub valuation: Option<i64>,
}

impl KummerResult {
    pub fn passed(&self) -> bool {
        self.valuation.is_none_or(|v| v > self.n as i64)
    }
}

fn kummer_hypothesis(p: u64, i: u64, j: u64, n: u32) -> Result<()> {
    if i < 2 || j < 2 {
        return Err(Error::Hypothesis(format!("indices must be >= 2, got i={i}, j={j}")));
    }
    if i.is_multiple_of(p - 1) {
        return Err(Error::Hypothesis(format!("(p-1) = {} divides i = {i}", p - 1)));
    }
    let modulus = p.pow(n) * (p - 1);
    if i % modulus != j % modulus {
        return Err(Error::Hypothesis(format!("i = {i} and j = {j} differ mod p^n(p-1) = {modulus}")));
    }
    Ok(())
}

/// `v_p((1-p^(i-1))B_i/i - (1-p^(j-1))B_j/j) >= n+1` under the hypotheses.
pub fn kummer_check(p: u64, i: u64, j: u64, n: u32) -> Result<KummerResult> {
    require_prime(p)?;
    kummer_hypothesis(p, i, j, n)?;
    let d = kummer_term(p, i) - kummer_term(p, j);
    Ok(KummerResult { p, i, j, n, valuation: valuation(&d, p) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KLBranch {
    p: u64,
    s0: u64,
    precision: u32,
}

impl KLBranch {
    pub fn new(p: u64, s0: u64, precision: u32) -> Result<Self> {
        require_prime(p)?;
        if precision == 0 {
            return invalid("precision must be at least 1");
        }
        if p < 5 && s0 != 0 {
            return invalid(format!("for p = {p} only the branch s0 = 0 exists"));
        }
        if p >= 5 && s0 > p - 2 {
            return invalid(format!("s0 = {s0} outside 0..={}", p - 2));
        }
        Ok(KLBranch { p, s0, precision })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s0(&self) -> u64 {
        self.s0
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `n = s0 + (p-1) t`.
    pub fn index(&self, t: u64) -> u64 {
        self.s0 + (self.p - 1) * t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchValue {
    pub t: u64,
    pub n: u64,
    pub exact: BigRational,
    pub value: PadicNumber,
}

/// Evaluates the branch at a p-adic integer `s` through the smallest
/// representative `t = s mod p^N` with `n >= 1`.
///
/// On the `s0 = 0` branch the values carry the pole: representatives that
/// agree mod `p^N` only agree to `N - 1 - 2 v_p(s)` digits, and the result
/// is returned at that absolute precision.
pub fn kl_branch_eval(branch: &KLBranch, s: &PadicNumber) -> Result<BranchValue> {
    let p = branch.p;
    let big_n = branch.precision;
    if s.p() != p {
        return invalid(format!("argument lives in Q_{} but the branch in Q_{p}", s.p()));
    }
    let t = s.residue(big_n)?;
    let t = u64::try_from(&t).map_err(|_| Error::InvalidArgument("representative too large".into()))?;
    kl_branch_at(branch, t)
}

/// Branch value at the natural representative `t`.
pub fn kl_branch_at(branch: &KLBranch, t: u64) -> Result<BranchValue> {
    let p = branch.p;
    let big_n = branch.precision as i64;
    let n = branch.index(t);
    if n == 0 {
        return Err(Error::Pole(format!("s = 0 on the s0 = 0 branch of ζ_{p}")));
    }
    let exact = kl_value(p, n)?;
    let abs = if branch.s0 == 0 {
        let v = crate::modular::vp_u64(t, p) as i64;
        big_n - 1 - 2 * v
    } else {
        debug_assert!(exact.is_zero() || valuation(&exact, p).unwrap() >= 0);
        big_n
    };
    let value = PadicNumber::from_rational_abs(&exact, p, abs)?;
    Ok(BranchValue { t, n, exact, value })
}

/// `(1 - p^(n-1))(1 - q^(n-1))(-B_n/n)`.
pub fn double_value(pair: PrimePair, n: u64) -> Result<BigRational> {
    if n < 2 {
        return invalid("double_value needs n >= 2");
    }
    Ok(-euler_factor(pair.p(), n - 1) * euler_factor(pair.q(), n - 1) * bernoulli(n as usize)
        / rat(n as i64))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedKummerResult {
    pub p_side: KummerResult,
    pub q_side: KummerResult,
}

impl ExtendedKummerResult {
    pub fn passed(&self) -> bool {
        self.p_side.passed() && self.q_side.passed()
    }
}

/// The double congruence on `(1-p^(k-1))(1-q^(k-1)) B_k/k`, checked mod
/// `p^(n+1)` and mod `q^(n+1)`.
pub fn extended_kummer_check(pair: PrimePair, i: u64, j: u64, n: u32) -> Result<ExtendedKummerResult> {
    let (p, q) = (pair.p(), pair.q());
    kummer_hypothesis(p, i, j, n)?;
    kummer_hypothesis(q, i, j, n)?;
    let term = |k: u64| euler_factor(p, k - 1) * euler_factor(q, k - 1) * bernoulli(k as usize) / rat(k as i64);
    let d = term(i) - term(j);
    let side = |r: u64| KummerResult { p: r, i, j, n, valuation: valuation(&d, r) };
    Ok(ExtendedKummerResult { p_side: side(p), q_side: side(q) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleBranch {
    pair: PrimePair,
    sigma0: i64,
}

/// `σ0` values whose branch is not regular: `-1`, the listed multiples of
/// `p-1` and `q-1`, and every `σ0` with `(p-1) | σ0+1` or `(q-1) | σ0+1`, where
/// the congruence hypothesis fails.
pub fn excluded_sigma0(pair: PrimePair) -> Vec<i64> {
    let (p, q) = (pair.p() as i64, pair.q() as i64);
    let top = (p - 1) * (q - 1) - 2;
    (-1..=top)
        .filter(|&s| {
            s == -1
                || (s > 0 && (s % (p - 1) == 0 || s % (q - 1) == 0))
                || (s + 1) % (p - 1) == 0
                || (s + 1) % (q - 1) == 0
        })
        .collect()
}

impl DoubleBranch {
    /// A regular branch; rejects excluded `σ0`.
    pub fn new(pair: PrimePair, sigma0: i64) -> Result<Self> {
        Self::check_pair(pair)?;
        let top = (pair.p() as i64 - 1) * (pair.q() as i64 - 1) - 2;
        if !(-1..=top).contains(&sigma0) {
            return invalid(format!("σ0 = {sigma0} outside -1..={top}"));
        }
        if excluded_sigma0(pair).contains(&sigma0) {
            return invalid(format!("σ0 = {sigma0} is an excluded branch"));
        }
        Ok(DoubleBranch { pair, sigma0 })
    }

    /// The `σ0 = -1` branch, whose `σ = 0` point is a pole.
    pub fn pole_branch(pair: PrimePair) -> Result<Self> {
        Self::check_pair(pair)?;
        Ok(DoubleBranch { pair, sigma0: -1 })
    }

    fn check_pair(pair: PrimePair) -> Result<()> {
        if pair.p() < 5 || pair.q() < 5 {
            return invalid("double branches need both primes >= 5");
        }
        Ok(())
    }

    pub fn pair(&self) -> PrimePair {
        self.pair
    }

    pub fn sigma0(&self) -> i64 {
        self.sigma0
    }

    pub fn is_pole_branch(&self) -> bool {
        self.sigma0 == -1
    }

    /// `σ0 + σ(p-1)(q-1) + 1`.
    pub fn index(&self, sigma: u64) -> i64 {
        let period = (self.pair.p() as i64 - 1) * (self.pair.q() as i64 - 1);
        self.sigma0 + sigma as i64 * period + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleBranchValue {
    pub k: u64,
    pub exact: BigRational,
    pub p_value: PadicNumber,
    pub q_value: PadicNumber,
}

/// `-(1-p^(k-1))(1-q^(k-1)) B_k/k` at `k = σ0 + σ(p-1)(q-1) + 1`, reduced
/// to absolute precision `N` in both primes.
pub fn double_branch_eval(branch: &DoubleBranch, sigma: u64, big_n: u32) -> Result<DoubleBranchValue> {
    let k = branch.index(sigma);
    if k <= 0 {
        return Err(Error::Pole("σ = 0 on the σ0 = -1 branch".into()));
    }
    let k = k as u64;
    let exact = -euler_factor(branch.pair.p(), k - 1) * euler_factor(branch.pair.q(), k - 1)
        * bernoulli(k as usize)
        / rat(k as i64);
    let p_value = PadicNumber::from_rational_abs(&exact, branch.pair.p(), big_n as i64)?;
    let q_value = PadicNumber::from_rational_abs(&exact, branch.pair.q(), big_n as i64)?;
    Ok(DoubleBranchValue { k, exact, p_value, q_value })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPower {
    pub prime: u64,
    pub series: PadicNumber,
    pub direct: PadicNumber,
    pub terms: u64,
}

impl UniversalPower {
    pub fn agrees(&self) -> bool {
        self.series == self.direct
    }
}

/// `n^s` in each `Z_p`, `p` in `primes`, through `sum_k C(s,k)(n-1)^k`
/// truncated where `(n-1)^k` vanishes mod `p^N`; compared with modular
/// exponentiation.
pub fn universal_power(n: &BigInt, s: i64, primes: &[u64], big_n: u32) -> Result<BTreeMap<u64, UniversalPower>> {
    let mut out = BTreeMap::new();
    for &p in primes {
        require_prime(p)?;
        if (n - BigInt::one()) % BigInt::from(p) != BigInt::zero() {
            return invalid(format!("n must be 1 mod every prime in the set, fails for {p}"));
        }
    }
    let nm1 = n - BigInt::one();
    for &p in primes {
        let m = pow_u(p, big_n);
        let mi = to_bigint(&m);
        let v = if nm1.is_zero() { u32::MAX } else { crate::modular::split_vp(&nm1, p).0 };
        let terms = if v == u32::MAX { 1 } else { big_n.div_ceil(v) as u64 };
        let terms = if s >= 0 { terms.min(s as u64 + 1) } else { terms };
        let mut acc = BigInt::zero();
        let mut power = BigInt::one();
        for k in 0..terms {
            acc = (acc + general_binomial(s, k) * &power) % &mi;
            power = (power * &nm1) % &mi;
        }
        let series = PadicNumber::from_residue(&acc, p, big_n)?;
        let base = mod_floor(n, &m);
        let direct = if s >= 0 {
            base.modpow(&num_bigint::BigUint::from(s as u64), &m)
        } else {
            let inv = mod_inv(n, &m).expect("n is a unit");
            inv.modpow(&num_bigint::BigUint::from(s.unsigned_abs()), &m)
        };
        let direct = PadicNumber::from_residue(&to_bigint(&direct), p, big_n)?;
        out.insert(p, UniversalPower { prime: p, series, direct, terms });
    }
    Ok(out)
}

/// `C(s, k)` for any integer `s`.
fn general_binomial(s: i64, k: u64) -> BigInt {
    if s >= 0 {
        return binomial(s as u64, k as i64);
    }
    // C(-a, k) = (-1)^k C(a+k-1, k)
    let c = binomial(s.unsigned_abs() + k - 1, k as i64);
    if k.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PqHurwitz {
    /// `sum_{k<=m} C(m,k) (F/b)^k B_k` with `m = 1 - n`.
    pub inner_sum: BigRational,
    /// True when the inner sum is integral at both primes.
    pub inner_integral: bool,
    /// `-(1/m)(1/F) * inner_sum`, the part before the angle-bracket factor.
    pub rational_part: BigRational,
    pub p_value: PadicNumber,
    pub q_value: PadicNumber,
}

fn hurwitz_guard(n: i64, b: u64, f: u64, pair: PrimePair) -> Result<u64> {
    if n >= 1 {
        return Err(Error::Pole(format!("the p-q Hurwitz function is evaluated at n <= 0, got {n}")));
    }
    if b == 0 || b >= f {
        return invalid(format!("need 0 < b < F, got b={b}, F={f}"));
    }
    if !f.is_multiple_of(pair.p() * pair.q()) {
        return invalid(format!("pq must divide F = {f}"));
    }
    if b.is_multiple_of(pair.p()) || b.is_multiple_of(pair.q()) {
        return invalid(format!("b = {b} must be prime to p and q"));
    }
    Ok((1 - n) as u64)
}

/// `-(1/m)(1/F)<b>^m sum_k C(m,k)(F/b)^k B_k` with `m = 1 - n`, in each prime.
pub fn pq_hurwitz(n: i64, b: u64, f: u64, pair: PrimePair, big_n: u32) -> Result<PqHurwitz> {
    let m = hurwitz_guard(n, b, f, pair)?;
    let ratio = BigRational::new(BigInt::from(f), BigInt::from(b));
    let mut inner = BigRational::zero();
    let mut pw = BigRational::one();
    for k in 0..=m {
        inner += int_rat(binomial(m, k as i64)) * &pw * bernoulli(k as usize);
        pw *= &ratio;
    }
    let rational_part = -&inner / (rat(m as i64) * rat(f as i64));
    let inner_integral = [pair.p(), pair.q()].iter().all(|&r| valuation(&inner, r).is_none_or(|v| v >= 0));
    let (bp, bq) = angle_bracket(b as i64, pair, big_n, big_n)?;
    let side = |x: &PadicNumber, r: u64| -> Result<PadicNumber> {
        let base = PadicNumber::from_rational(&rational_part, r, big_n)?;
        if base.is_zero() {
            return Ok(base);
        }
        base.mul(&x.pow(m)?)
    };
    Ok(PqHurwitz {
        p_value: side(&bp, pair.p())?,
        q_value: side(&bq, pair.q())?,
        inner_sum: inner,
        inner_integral,
        rational_part,
    })
}

/// The same value through `-(1/m) F^(m-1) b^-m B_m(b/F) <b>^m`.
pub fn pq_hurwitz_polynomial_route(n: i64, b: u64, f: u64, pair: PrimePair, big_n: u32) -> Result<(PadicNumber, PadicNumber)> {
    let m = hurwitz_guard(n, b, f, pair)?;
    let x = BigRational::new(BigInt::from(b), BigInt::from(f));
    let bm = bernoulli_polynomial(m as usize).eval(&x);
    let scale = int_rat(num_traits::pow(BigInt::from(f), m as usize - 1))
        / int_rat(num_traits::pow(BigInt::from(b), m as usize));
    let rational_part = -(bm * scale) / rat(m as i64);
    let (bp, bq) = angle_bracket(b as i64, pair, big_n, big_n)?;
    let side = |x: &PadicNumber, r: u64| -> Result<PadicNumber> {
        let base = PadicNumber::from_rational(&rational_part, r, big_n)?;
        if base.is_zero() {
            return Ok(base);
        }
        base.mul(&x.pow(m)?)
    };
    Ok((side(&bp, pair.p())?, side(&bq, pair.q())?))
}

/// True when `a` and `b` agree to absolute precision `m`.
pub fn agree_to(a: &BigRational, b: &BigRational, p: u64, m: i64) -> bool {
    valuation(&(a - b), p).is_none_or(|v| v >= m)
}
