//! Moments and open-set values of the measures `ζ_a` and `ζ_{a,p,q}`,
//! built from the generators `Ψ_r(t)` through exact series in `z = log t`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::mahler::characteristic_coefficients;
use crate::modular::{mod_inv_u64, require_prime};
use crate::padic::{PadicNumber, PrimePair};
use crate::rational::{int_rat, is_p_integral, rat, zeta_neg, BigRational, PolyRational};

/// A truncated power series `sum_k c_k z^k + O(z^(M+1))` with rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSeries {
    coeffs: Vec<BigRational>,
}

impl ExpSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a series needs at least the constant term");
        }
        Ok(ExpSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        ExpSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    /// `exp(c z)`.
    pub fn exp_linear(c: &BigRational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = BigRational::one();
        for k in 0..=order {
            coeffs.push(term.clone());
            term = term * c / rat(k as i64 + 1);
        }
        ExpSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `k! c_k`, the k-th derivative at `z = 0`.
    pub fn slot(&self, k: usize) -> BigRational {
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        self.coeff(k) * int_rat(fact)
    }

    fn common(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.common(other);
        ExpSeries { coeffs: (0..=m).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.common(other);
        ExpSeries { coeffs: (0..=m).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExpSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.common(other);
        let coeffs = (0..=m)
            .map(|k| (0..=k).map(|i| &self.coeffs[i] * &other.coeffs[k - i]).sum())
            .collect();
        ExpSeries { coeffs }
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidArgument("series with zero constant term is not a unit".into()));
        }
        let mut out: Vec<BigRational> = vec![c0.recip()];
        for k in 1..=self.order() {
            let s: BigRational = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out.push(-s / c0);
        }
        Ok(ExpSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `self / other` when both vanish at `z = 0` and `other` has a simple
    /// zero there; the result loses one order.
    pub fn div_removable(&self, other: &Self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || !other.coeffs[0].is_zero() {
            return invalid("removable division needs both constant terms zero");
        }
        let a = ExpSeries { coeffs: self.coeffs[1..].to_vec() };
        let b = ExpSeries { coeffs: other.coeffs[1..].to_vec() };
        a.div(&b)
    }

    /// `F(λ z)`.
    pub fn rescale(&self, lambda: &BigRational) -> Self {
        let mut pw = BigRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * &pw;
                pw *= lambda;
                v
            })
            .collect();
        ExpSeries { coeffs }
    }
}

impl fmt::Display for ExpSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order())?;
        for c in &self.coeffs {
            write!(f, "; {c}")?;
        }
        Ok(())
    }
}

impl FromStr for ExpSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(';').map(str::trim);
        let order: usize = parts
            .next()
            .and_then(|o| o.parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing series order in {s:?}")))?;
        let coeffs = parts
            .map(|c| c.parse::<BigRational>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != order + 1 {
            return Err(Error::Parse(format!("order {order} needs {} coefficients, got {}", order + 1, coeffs.len())));
        }
        ExpSeries::new(coeffs)
    }
}

fn check_ar(a: u64, r: u64) -> Result<()> {
    if a < 2 || r < 1 {
        return invalid(format!("need a >= 2 and r >= 1, got a={a}, r={r}"));
    }
    Ok(())
}

/// `ξ_r(n)`: 0 if `r ∤ n`, `1 - a` if `ra | n`, else 1.
pub fn xi(n: i64, a: u64, r: u64) -> Result<i64> {
    check_ar(a, r)?;
    let (a, r) = (a as i64, r as i64);
    Ok(if n % r != 0 {
        0
    } else if n % (r * a) == 0 {
        1 - a
    } else {
        1
    })
}

/// `sum_{b=1}^{a} ξ_r(br)`, which vanishes.
pub fn xi_sum_zero(a: u64, r: u64) -> Result<i64> {
    check_ar(a, r)?;
    (1..=a as i64).map(|b| xi(b * r as i64, a, r)).sum()
}

/// `Ψ_r(e^z) = (1 - e^(raz))^-1 sum_b ξ_r(br) e^(brz)` to order `M`.
pub fn psi_r_series(a: u64, r: u64, order: usize) -> Result<ExpSeries> {
    check_ar(a, r)?;
    if order < 1 {
        return invalid("series order must be at least 1");
    }
    let m = order + 1;
    let mut num = ExpSeries::zero(m);
    for b in 1..=a {
        let w = xi((b * r) as i64, a, r)?;
        if w != 0 {
            num = num.add(&ExpSeries::exp_linear(&rat((b * r) as i64), m).scale(&rat(w)));
        }
    }
    assert!(num.coeffs[0].is_zero(), "ξ_r sums to zero, numerator must vanish at z = 0");
    let den = ExpSeries::exp_linear(&rat(0), m).sub(&ExpSeries::exp_linear(&rat((r * a) as i64), m));
    num.div_removable(&den)
}

/// `(1 - a^(m+1)) r^m ζ(-m)`.
pub fn moment_closed_form(a: u64, r: u64, m: u64) -> BigRational {
    let am = num_traits::pow(BigInt::from(a), m as usize + 1);
    let rm = num_traits::pow(BigInt::from(r), m as usize);
    (rat(1) - int_rat(am)) * int_rat(rm) * zeta_neg(m)
}

/// `(t d/dt)^m Ψ_r(t)` at `t = 1`, read from the series and checked
/// against `(1 - a^(m+1)) r^m ζ(-m)`.
pub fn moment(a: u64, r: u64, m: u64) -> Result<BigRational> {
    let s = psi_r_series(a, r, (m as usize).max(1))?;
    let value = s.slot(m as usize);
    assert_eq!(value, moment_closed_form(a, r, m), "series and closed moment disagree at a={a}, r={r}, m={m}");
    Ok(value)
}

/// All moments `0..=max_m` from a single series.
pub fn moments(a: u64, r: u64, max_m: u64) -> Result<Vec<BigRational>> {
    let s = psi_r_series(a, r, (max_m as usize).max(1))?;
    (0..=max_m)
        .map(|m| {
            let v = s.slot(m as usize);
            assert_eq!(v, moment_closed_form(a, r, m));
            Ok(v)
        })
        .collect()
}

fn check_coprime(a: u64, pair: PrimePair) -> Result<()> {
    if a < 2 || a.gcd(&(pair.p() * pair.q())) != 1 {
        return invalid(format!("need a >= 2 prime to pq, got a={a}"));
    }
    Ok(())
}

/// `∫ x^m dζ_{a,p,q} = (1 - a^(m+1))(1 - q^m) ζ(-m)`, as `moment(a,1,m) - moment(a,q,m)`.
pub fn double_moment(a: u64, pair: PrimePair, m: u64) -> Result<BigRational> {
    check_coprime(a, pair)?;
    let v = moment(a, 1, m)? - moment(a, pair.q(), m)?;
    assert!(is_p_integral(&v, pair.p()), "double moment not p-integral at a={a}, m={m}");
    Ok(v)
}

/// `(1 - a^(m+1))(1 - p^m)(1 - q^m) ζ(-m)`.
pub fn restricted_moment_closed_form(a: u64, pair: PrimePair, m: u64) -> BigRational {
    let pm = int_rat(num_traits::pow(BigInt::from(pair.p()), m as usize));
    moment_closed_form(a, 1, m) * (rat(1) - pm) * (rat(1) - int_rat(num_traits::pow(BigInt::from(pair.q()), m as usize)))
}

/// `∫_{Z_p^×} x^m dζ_{a,p,q}` through the unit twist `Ψ(t) - Ψ(t^p)` of the
/// generator `Ψ_1 - Ψ_q`, compared with the closed form.
pub fn restricted_moment(a: u64, pair: PrimePair, m: u64) -> Result<BigRational> {
    check_coprime(a, pair)?;
    let order = (m as usize).max(1);
    let gen = psi_r_series(a, 1, order)?.sub(&psi_r_series(a, pair.q(), order)?);
    let twisted = gen.sub(&gen.rescale(&rat(pair.p() as i64)));
    let value = twisted.slot(m as usize);
    assert_eq!(value, restricted_moment_closed_form(a, pair, m), "twist and closed form disagree at m={m}");
    Ok(value)
}

/// Coefficients `c_{k,m}` of `C(x,k) = sum_m c_{k,m} x^m` for `k <= max_k`.
pub fn binomial_expansion_table(max_k: usize) -> Vec<PolyRational> {
    let x = PolyRational::from_ints(&[0, 1]);
    let mut rows = vec![PolyRational::from_ints(&[1])];
    for k in 1..=max_k {
        let factor = &x - &PolyRational::constant(rat(k as i64 - 1));
        let next = (&rows[k - 1] * &factor).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
        rows.push(next);
    }
    rows
}

/// `d_k = ∫ C(x,k) dζ_a = sum_m c_{k,m}(1 - a^(m+1)) ζ(-m)` for `k <= max_k`.
pub fn binomial_moments(a: u64, max_k: usize) -> Result<Vec<BigRational>> {
    check_ar(a, 1)?;
    static CACHE: Mutex<BTreeMap<u64, Vec<BigRational>>> = Mutex::new(BTreeMap::new());
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(d) = cache.get(&a).filter(|d| d.len() > max_k) {
        return Ok(d[..=max_k].to_vec());
    }
    let d = binomial_moments_uncached(a, max_k);
    cache.insert(a, d.clone());
    Ok(d)
}

fn binomial_moments_uncached(a: u64, max_k: usize) -> Vec<BigRational> {
    let mono: Vec<BigRational> = (0..=max_k as u64).map(|m| moment_closed_form(a, 1, m)).collect();
    binomial_expansion_table(max_k)
        .iter()
        .map(|row| row.coeffs().iter().zip(&mono).map(|(c, d)| c * d).sum())
        .collect()
}

/// The same `d_k` as Taylor coefficients of `Ψ(1 + T)`, i.e. `δ_k Ψ(1)`.
pub fn binomial_moments_taylor(a: u64, max_k: usize) -> Result<Vec<BigRational>> {
    let f = psi_r_element(a, 1, None)?;
    let num = f.num.taylor_shift(&rat(1));
    let den = f.den.taylor_shift(&rat(1));
    let n = ExpSeries { coeffs: (0..=max_k).map(|k| num.coeff(k)).collect() };
    let d = ExpSeries { coeffs: (0..=max_k).map(|k| den.coeff(k)).collect() };
    Ok(n.div(&d)?.coeffs)
}

/// A rational function `P/Q` with p-integral coefficients and `|Q(1)|_p = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPrimeElement {
    num: PolyRational,
    den: PolyRational,
    p: Option<u64>,
}

impl RPrimeElement {
    pub fn new(num: PolyRational, den: PolyRational, p: u64) -> Result<Self> {
        require_prime(p)?;
        let integral = |f: &PolyRational| f.coeffs().iter().all(|c| is_p_integral(c, p));
        if !integral(&num) || !integral(&den) {
            return invalid(format!("coefficients must be {p}-integral"));
        }
        let q1 = den.eval(&rat(1));
        if q1.is_zero() || !is_p_integral(&q1.recip(), p) {
            return invalid(format!("Q(1) = {q1} is not a {p}-adic unit"));
        }
        Ok(RPrimeElement { num, den, p: Some(p) })
    }

    pub fn num(&self) -> &PolyRational {
        &self.num
    }

    pub fn den(&self) -> &PolyRational {
        &self.den
    }

    pub fn p(&self) -> Option<u64> {
        self.p
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.num.eval(&rat(1)) / self.den.eval(&rat(1))
    }
}

/// `Ψ_r(t)` with the removable factor `1 - t` cancelled; `Q = 1 + t + ... + t^(ra-1)`.
pub fn psi_r_element(a: u64, r: u64, p: Option<u64>) -> Result<RPrimeElement> {
    check_ar(a, r)?;
    let deg = (r * a) as usize;
    let mut n = vec![BigRational::zero(); deg + 1];
    for b in 1..=a {
        n[(b * r) as usize] = rat(xi((b * r) as i64, a, r)?);
    }
    // N(t) / (1 - t): the running prefix sums, negated, since N(1) = 0
    let mut quotient = Vec::with_capacity(deg);
    let mut acc = BigRational::zero();
    for c in &n[..deg] {
        acc += c;
        quotient.push(acc.clone());
    }
    debug_assert!((acc + &n[deg]).is_zero());
    let num = PolyRational::new(quotient);
    let den = PolyRational::new(vec![rat(1); deg]);
    match p {
        Some(p) => RPrimeElement::new(num, den, p),
        None => Ok(RPrimeElement { num, den, p: None }),
    }
}

/// `Q^(i)/i!`.
fn divided_derivative(f: &PolyRational, i: usize) -> PolyRational {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(i)
        .map(|(j, c)| c * int_rat(crate::rational::binomial(j as u64, i as i64)))
        .collect();
    PolyRational::new(coeffs)
}

/// `δ_n = (t^n/n!) d^n/dt^n` applied to `P/Q`, returned as `P_n / Q^(n+1)`.
///
/// Leibniz in divided derivatives: `(1/Q)^(j)/j! = R_j / Q^(j+1)` with
/// `R_0 = 1`, `R_j = -sum_{i=1}^{j} (Q^(i)/i!) R_(j-i) Q^(i-1)`.
pub fn delta_operator(f: &RPrimeElement, n: usize) -> Result<RPrimeElement> {
    let q = &f.den;
    let dq: Vec<PolyRational> = (0..=n).map(|i| divided_derivative(q, i)).collect();
    let qpow: Vec<PolyRational> = (0..=n).scan(PolyRational::from_ints(&[1]), |acc, _| {
        let cur = acc.clone();
        *acc = &*acc * q;
        Some(cur)
    })
    .collect();
    let mut r = vec![PolyRational::from_ints(&[1])];
    for j in 1..=n {
        let mut s = PolyRational::zero();
        for i in 1..=j {
            s = &s + &(&(&dq[i] * &r[j - i]) * &qpow[i - 1]);
        }
        r.push(-&s);
    }
    let mut num = PolyRational::zero();
    for k in 0..=n {
        num = &num + &(&(&divided_derivative(&f.num, k) * &r[n - k]) * &qpow[k]);
    }
    let num = &num * &PolyRational::monomial(rat(1), n);
    let den = &qpow[n] * q;
    match f.p {
        Some(p) => RPrimeElement::new(num, den, p),
        None => Ok(RPrimeElement { num, den, p: None }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenSetMeasure {
    pub a: u64,
    pub p: u64,
    pub n: u32,
    pub b: u64,
    pub terms: usize,
    /// Truncated Mahler sum, exact.
    pub partial_sum: BigRational,
    /// The partial sum at its certified absolute precision.
    pub value: PadicNumber,
    /// `(1/a) floor(ab/p^n) + ((1/a) - 1)/2`.
    pub closed_form: BigRational,
    /// `ζ(0, x) - a ζ(0, x')` with `x, x'` the representatives in `(0, 1]`
    /// of `b/p^n` and `a^-1 b/p^n`.
    pub hurwitz_form: BigRational,
}

impl OpenSetMeasure {
    pub fn matches_closed_form(&self) -> Result<bool> {
        self.value.congruent(&PadicNumber::from_rational_abs(&self.closed_form, self.p, self.value.absolute_precision().unwrap_or(0))?, self.value.absolute_precision().unwrap_or(0))
    }

    pub fn matches_hurwitz_form(&self) -> Result<bool> {
        let a = self.value.absolute_precision().unwrap_or(0);
        self.value.congruent(&PadicNumber::from_rational_abs(&self.hurwitz_form, self.p, a)?, a)
    }
}

/// Conjectured closed form `(1/a)[ab/p^n] + ((1/a) - 1)/2`.
pub fn open_set_closed_form(a: u64, p: u64, n: u32, b: u64) -> BigRational {
    let pn = p.pow(n);
    let inv_a = BigRational::new(BigInt::one(), BigInt::from(a));
    &inv_a * rat(((a * b) / pn) as i64) + (&inv_a - rat(1)) / rat(2)
}

/// `ζ(0, x) - a ζ(0, x') = a x' - x + (1 - a)/2`, from `Ψ(t) = t/(1-t) - a t^a/(1-t^a)`.
pub fn open_set_hurwitz_form(a: u64, p: u64, n: u32, b: u64) -> Result<BigRational> {
    let pn = p.pow(n);
    let inv = mod_inv_u64(a % pn.max(1), pn).unwrap_or(0);
    let rep = |c: u64| if c == 0 { pn } else { c };
    let x = BigRational::new(BigInt::from(rep(b % pn)), BigInt::from(pn));
    let bp = if pn == 1 { 0 } else { ((inv as u128 * b as u128) % pn as u128) as u64 };
    let xp = BigRational::new(BigInt::from(rep(bp)), BigInt::from(pn));
    Ok(rat(a as i64) * xp - x + (rat(1) - rat(a as i64)) / rat(2))
}

/// `ζ_a(b + p^n Z_p) = sum_{k<=L} a_k(b,n) d_k`.
///
/// The characteristic function satisfies `v_p(a_k) >= σ` once `k >= σ p^n`
/// and every `d_k` is p-integral, so the truncated sum is certified to
/// absolute precision `floor((L+1)/p^n)`.
pub fn measure_on_open_set(a: u64, p: u64, n: u32, b: u64, l: u64) -> Result<OpenSetMeasure> {
    require_prime(p)?;
    if a < 2 || a.is_multiple_of(p) {
        return invalid(format!("need a >= 2 prime to p, got a={a}"));
    }
    let pn = p.pow(n);
    let precision = (l + 1) / pn;
    if precision == 0 {
        return Err(Error::InsufficientTail(format!("L = {l} certifies nothing for p^n = {pn}; need L >= p^n - 1")));
    }
    let coeffs = characteristic_coefficients(b, n, p, l)?;
    let d = binomial_moments(a, l as usize)?;
    let partial_sum: BigRational = coeffs.iter().zip(&d).map(|(c, dk)| int_rat(c.clone()) * dk).sum();
    let value = PadicNumber::from_rational_abs(&partial_sum, p, precision as i64)?;
    Ok(OpenSetMeasure {
        a,
        p,
        n,
        b,
        terms: coeffs.len(),
        partial_sum,
        value,
        closed_form: open_set_closed_form(a, p, n, b),
        hurwitz_form: open_set_hurwitz_form(a, p, n, b)?,
    })
}

/// Default truncation `3 s p^n`.
pub fn default_truncation(p: u64, n: u32, s: u32) -> u64 {
    3 * s as u64 * p.pow(n)
}
