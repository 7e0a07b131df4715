//! Mahler expansions on a finite window: coefficients, binomial inversion,
//! difference operators, Bojanic-style decay checks and evaluation at
//! p-adic integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::modular::require_prime;
use crate::padic::PadicNumber;
use crate::rational::{binomial, int_rat, valuation, BigRational};

/// A rational-valued function sampled on `0..=bound`.
pub struct IntegerSequenceFn {
    bound: u64,
    eval: Box<dyn Fn(u64) -> BigRational + Send + Sync>,
}

impl IntegerSequenceFn {
    pub fn new(bound: u64, eval: impl Fn(u64) -> BigRational + Send + Sync + 'static) -> Self {
        IntegerSequenceFn { bound, eval: Box::new(eval) }
    }

    pub fn from_values(values: Vec<BigRational>) -> Self {
        let bound = values.len().saturating_sub(1) as u64;
        IntegerSequenceFn::new(bound, move |k| values[k as usize].clone())
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn at(&self, k: u64) -> Result<BigRational> {
        if k > self.bound {
            return invalid(format!("sequence evaluated at {k} beyond its window 0..={}", self.bound));
        }
        Ok((self.eval)(k))
    }

    pub fn values(&self, upto: u64) -> Result<Vec<BigRational>> {
        (0..=upto).map(|k| self.at(k)).collect()
    }
}

impl fmt::Debug for IntegerSequenceFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerSequenceFn").field("bound", &self.bound).finish()
    }
}

/// `|a_n|_p <= p^-sigma` for `n >= sigma p^t` and every `sigma <= s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecayCertificate {
    pub s: u32,
    pub t: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerSeries {
    pub p: u64,
    pub precision: u32,
    pub coeffs: Vec<PadicNumber>,
    pub certificate: Option<DecayCertificate>,
}

/// `a_n = sum_k (-1)^(n-k) C(n,k) b_k`, via repeated forward differences.
pub fn binomial_inversion(b: &[BigRational]) -> Vec<BigRational> {
    let mut row = b.to_vec();
    let mut out = Vec::with_capacity(b.len());
    while !row.is_empty() {
        out.push(row[0].clone());
        for i in 0..row.len() - 1 {
            row[i] = &row[i + 1] - &row[i];
        }
        row.pop();
    }
    out
}

/// `b_n = sum_k C(n,k) a_k`, the inverse of [`binomial_inversion`].
pub fn forward_binomial(a: &[BigRational]) -> Vec<BigRational> {
    (0..a.len())
        .map(|n| {
            a.iter()
                .take(n + 1)
                .enumerate()
                .filter(|(_, ak)| !ak.is_zero())
                .map(|(k, ak)| ak * int_rat(binomial(n as u64, k as i64)))
                .sum()
        })
        .collect()
}

/// The defining alternating sum, kept as an independent route to the coefficients.
pub fn mahler_coefficient_direct(values: &[BigRational], n: usize) -> BigRational {
    (0..=n)
        .map(|k| {
            let c = int_rat(binomial(n as u64, k as i64)) * &values[k];
            if (n - k).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .sum()
}

/// Exact coefficients `a_0..=a_L` of `f` on its window.
pub fn mahler_coefficients_exact(f: &IntegerSequenceFn, l: u64) -> Result<Vec<BigRational>> {
    Ok(binomial_inversion(&f.values(l)?))
}

pub fn mahler_coefficients(f: &IntegerSequenceFn, l: u64, p: u64, prec: u32) -> Result<MahlerSeries> {
    require_prime(p)?;
    let coeffs = mahler_coefficients_exact(f, l)?
        .iter()
        .map(|a| PadicNumber::from_rational(a, p, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MahlerSeries { p, precision: prec, coeffs, certificate: None })
}

/// Coefficients from values that are themselves only known p-adically.
pub fn mahler_coefficients_padic(values: &[PadicNumber], p: u64, prec: u32) -> Result<MahlerSeries> {
    require_prime(p)?;
    let mut row = values.to_vec();
    let mut coeffs = Vec::with_capacity(values.len());
    while !row.is_empty() {
        if row[0].absolute_precision().is_some_and(|a| a <= 0) {
            return Err(Error::PrecisionExhausted(format!(
                "coefficient a_{} has no known digits",
                coeffs.len()
            )));
        }
        coeffs.push(row[0].clone());
        for i in 0..row.len() - 1 {
            row[i] = row[i + 1].sub(&row[i])?;
        }
        row.pop();
    }
    Ok(MahlerSeries { p, precision: prec, coeffs, certificate: None })
}

/// `D^n f(x) = sum_k C(n,k) (-1)^(n-k) f(x+k)`.
pub fn difference_operator(f: &IntegerSequenceFn, n: u64, x: u64) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for k in 0..=n {
        let term = int_rat(binomial(n, k as i64)) * f.at(x + k)?;
        if (n - k).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Checks `D^n f(m) = sum_{j<=m} C(m,j) a_{n+j}` for one `(n, m)`.
pub fn shift_identity_holds(f: &IntegerSequenceFn, n: u64, m: u64) -> Result<bool> {
    let a = mahler_coefficients_exact(f, n + m)?;
    let rhs: BigRational = (0..=m)
        .map(|j| int_rat(binomial(m, j as i64)) * &a[(n + j) as usize])
        .sum();
    Ok(difference_operator(f, n, m)? == rhs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayViolation {
    pub sigma: u32,
    pub index: u64,
    pub valuation: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayReport {
    pub p: u64,
    pub s: u32,
    pub t: u32,
    pub window: u64,
    /// Largest `s'` with `v_p(f(x + p^t) - f(x)) >= s'` on the window, capped at 64.
    pub observed_modulus: u32,
    pub hypothesis_holds: bool,
    pub violation: Option<DecayViolation>,
}

impl DecayReport {
    pub fn certificate(&self) -> Option<DecayCertificate> {
        match self.violation {
            None => Some(DecayCertificate { s: self.s, t: self.t }),
            Some(_) => None,
        }
    }
}

const MODULUS_CAP: u32 = 64;

/// Checks `|a_n|_p <= p^-sigma` for `sigma p^t <= n <= L` and all `1 <= sigma <= s`.
pub fn verify_decay(f: &IntegerSequenceFn, p: u64, s: u32, t: u32, l: u64) -> Result<DecayReport> {
    require_prime(p)?;
    let values = f.values(l)?;
    let coeffs = binomial_inversion(&values);
    let pt = p.pow(t);
    let mut observed = MODULUS_CAP;
    for x in 0..values.len() as u64 {
        let y = x + pt;
        if y > l {
            break;
        }
        if let Some(v) = valuation(&(&values[y as usize] - &values[x as usize]), p) {
            observed = observed.min(v.max(0) as u32);
        }
    }
    let mut violation = None;
    'outer: for sigma in 1..=s {
        let start = sigma as u64 * pt;
        for n in start..=l {
            if let Some(v) = valuation(&coeffs[n as usize], p) {
                if v < sigma as i64 {
                    violation = Some(DecayViolation { sigma, index: n, valuation: v });
                    break 'outer;
                }
            }
        }
    }
    Ok(DecayReport {
        p,
        s,
        t,
        window: l,
        observed_modulus: observed,
        hypothesis_holds: observed >= s,
        violation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerEval {
    pub value: PadicNumber,
    pub terms_used: usize,
    /// Set when no decay certificate backed the truncation.
    pub heuristic: bool,
}

fn floor_log(p: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut acc = p;
    while acc <= n {
        acc = acc.saturating_mul(p);
        e += 1;
    }
    e
}

fn ceil_log(p: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut acc = 1u64;
    while acc < n {
        acc = acc.saturating_mul(p);
        e += 1;
    }
    e
}

/// `C(X, n)` for an integer `X` of either sign.
fn binomial_big(x: &BigInt, n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..n {
        acc *= x - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

impl MahlerSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn with_certificate(mut self, cert: DecayCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    /// Exact finite sum `sum_{n<=m} C(m,n) a_n` at a natural point inside the window.
    pub fn evaluate_at_natural(&self, m: u64) -> Result<PadicNumber> {
        if m as usize >= self.coeffs.len() {
            return invalid(format!("point {m} lies outside the window of {} coefficients", self.len()));
        }
        let mut acc = PadicNumber::exact_zero(self.p);
        for (n, a) in self.coeffs.iter().enumerate().take(m as usize + 1) {
            if a.is_exact_zero() {
                continue;
            }
            let c = int_rat(binomial(m, n as i64));
            let c = PadicNumber::from_rational(&c, self.p, self.precision.max(1))?;
            acc = acc.add(&c.mul(a)?)?;
        }
        Ok(acc)
    }

    /// `sum_n C(x,n) a_n` at a p-adic integer `x`, truncated where the tail is
    /// certified (or, without a certificate, where the computed tail vanishes).
    pub fn evaluate(&self, x: &PadicNumber) -> Result<MahlerEval> {
        let p = self.p;
        if x.p() != p {
            return invalid(format!("point lives in Q_{} but the series in Q_{p}", x.p()));
        }
        if x.valuation().is_some_and(|v| v < 0) {
            return invalid("Mahler series evaluate only at p-adic integers");
        }
        let x_abs = x.absolute_precision().unwrap_or(i64::MAX);
        let coeff_abs = self
            .coeffs
            .iter()
            .filter_map(|a| a.absolute_precision())
            .min()
            .unwrap_or(i64::MAX);
        let (target, terms, heuristic) = match self.certificate {
            Some(DecayCertificate { s, t }) => {
                let pt = p.pow(t) as usize;
                let wanted = (self.precision as i64).min(s as i64);
                // terms n >= A p^t have |a_n| <= p^-A
                let max_a = (self.coeffs.len() / pt) as i64;
                let a = wanted.min(max_a);
                if a <= 0 {
                    return Err(Error::InsufficientTail(format!(
                        "{} coefficients cannot reach index p^t = {pt}",
                        self.len()
                    )));
                }
                (a, (a as usize) * pt, false)
            }
            None => {
                let guard = ceil_log(p, self.len() as u64).max(1) as usize;
                let n = self.len();
                if n < guard {
                    return Err(Error::InsufficientTail("series too short".into()));
                }
                let tail_vanishes = self.coeffs[n - guard..].iter().all(|a| {
                    a.valuation().is_none_or(|v| v >= self.precision as i64)
                });
                if !tail_vanishes {
                    return Err(Error::InsufficientTail(format!(
                        "no certificate and the last {guard} coefficients do not vanish mod p^{}",
                        self.precision
                    )));
                }
                (self.precision as i64, n, true)
            }
        };
        let xi = x.lift()?;
        let mut acc = PadicNumber::approx_zero(p, target.min(coeff_abs));
        for (n, a) in self.coeffs.iter().enumerate().take(terms) {
            if a.is_exact_zero() {
                continue;
            }
            // C(x, n) = C(X, n) mod p^(A_x - floor(log_p n))
            let c_prec = x_abs.saturating_sub(floor_log(p, n as u64) as i64);
            let c = binomial_big(&xi, n as u64);
            let c = if c_prec >= i64::MAX / 2 {
                PadicNumber::from_rational(&int_rat(c), p, target.max(1) as u32 + 1)?
            } else if c_prec <= 0 {
                PadicNumber::approx_zero(p, 0)
            } else {
                PadicNumber::from_rational_abs(&int_rat(c), p, c_prec)?
            };
            acc = acc.add(&c.mul(a)?)?;
        }
        Ok(MahlerEval { value: acc.truncate(target), terms_used: terms, heuristic })
    }

    /// Line-oriented form: `p N L`, then `index valuation unit` per coefficient.
    /// Exact zeros use valuation `inf`, approximate zeros `O<A>`; a fourth
    /// column records relative precision when it differs from `N`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.p, self.precision, self.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            match (a.valuation(), a.absolute_precision()) {
                (None, None) => out.push_str(&format!("{i} inf 0\n")),
                (None, Some(abs)) => out.push_str(&format!("{i} O{abs} 0\n")),
                (Some(v), _) => {
                    let rp = a.relative_precision();
                    if rp == self.precision {
                        out.push_str(&format!("{i} {v} {}\n", a.unit()));
                    } else {
                        out.push_str(&format!("{i} {v} {} {rp}\n", a.unit()));
                    }
                }
            }
        }
        if let Some(c) = self.certificate {
            out.push_str(&format!("certificate {} {}\n", c.s, c.t));
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("mahler text: {what}"));
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty"))?.split_whitespace().collect();
        if header.len() != 3 {
            return Err(bad("header must be `p N L`"));
        }
        let p: u64 = header[0].parse().map_err(|_| bad("prime"))?;
        let prec: u32 = header[1].parse().map_err(|_| bad("precision"))?;
        let len: usize = header[2].parse().map_err(|_| bad("length"))?;
        require_prime(p)?;
        let mut coeffs = Vec::with_capacity(len);
        let mut certificate = None;
        for line in lines {
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.first() == Some(&"certificate") {
                if cols.len() != 3 {
                    return Err(bad("certificate line"));
                }
                certificate = Some(DecayCertificate {
                    s: cols[1].parse().map_err(|_| bad("certificate s"))?,
                    t: cols[2].parse().map_err(|_| bad("certificate t"))?,
                });
                continue;
            }
            if cols.len() < 3 || cols.len() > 4 {
                return Err(bad(&format!("coefficient line {line:?}")));
            }
            let idx: usize = cols[0].parse().map_err(|_| bad("index"))?;
            if idx != coeffs.len() {
                return Err(bad(&format!("index {idx} out of order")));
            }
            let a = if cols[1] == "inf" {
                PadicNumber::exact_zero(p)
            } else if let Some(abs) = cols[1].strip_prefix('O') {
                PadicNumber::approx_zero(p, abs.parse().map_err(|_| bad("approximate zero"))?)
            } else {
                let v: i64 = cols[1].parse().map_err(|_| bad("valuation"))?;
                let rp = match cols.get(3) {
                    Some(r) => r.parse().map_err(|_| bad("relative precision"))?,
                    None => prec,
                };
                format!("({v}, {}, {rp})_{p}", cols[2]).parse()?
            };
            coeffs.push(a);
        }
        if coeffs.len() != len {
            return Err(bad(&format!("expected {len} coefficients, found {}", coeffs.len())));
        }
        Ok(MahlerSeries { p, precision: prec, coeffs, certificate })
    }
}

pub fn evaluate_mahler(series: &MahlerSeries, x: &PadicNumber) -> Result<MahlerEval> {
    series.evaluate(x)
}

/// Exact coefficients of the indicator of `b + p^n Z_p`, indices `0..=L`.
pub fn characteristic_coefficients(b: u64, n: u32, p: u64, l: u64) -> Result<Vec<BigInt>> {
    require_prime(p)?;
    let pn = p.pow(n);
    if b >= pn {
        return invalid(format!("residue {b} not below p^n = {pn}"));
    }
    let mut row: Vec<BigInt> = (0..=l).map(|x| BigInt::from((x % pn == b) as u8)).collect();
    let mut out = Vec::with_capacity(row.len());
    while !row.is_empty() {
        out.push(row[0].clone());
        for i in 0..row.len() - 1 {
            row[i] = &row[i + 1] - &row[i];
        }
        row.pop();
    }
    Ok(out)
}

/// Mahler series of `χ_{b + p^n Z_p}`; locally constant, so it carries the
/// certificate `(prec, n)`.
pub fn characteristic_mahler(b: u64, n: u32, p: u64, l: u64, prec: u32) -> Result<MahlerSeries> {
    let coeffs = characteristic_coefficients(b, n, p, l)?
        .into_iter()
        .map(|a| PadicNumber::from_rational(&int_rat(a), p, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MahlerSeries {
        p,
        precision: prec,
        coeffs,
        certificate: Some(DecayCertificate { s: prec, t: n }),
    })
}

/// Bound `max |a_n|_p` over `n` in the given index range, as an exponent:
/// the least valuation, or `None` if every coefficient is zero.
pub fn tail_valuation(series: &MahlerSeries, from: usize) -> Option<i64> {
    series.coeffs.iter().skip(from).filter_map(|a| a.valuation()).min()
}

/// Exact alternating-sum coefficient for a characteristic function, used as
/// a cross-check of [`characteristic_coefficients`].
pub fn characteristic_coefficient_direct(b: u64, n: u32, p: u64, k: u64) -> BigInt {
    let pn = p.pow(n);
    let mut acc = BigInt::zero();
    let mut j = b;
    while j <= k {
        let c = binomial(k, j as i64);
        if (k - j).is_even() {
            acc += c;
        } else {
            acc -= c;
        }
        j += pn;
    }
    acc
}
