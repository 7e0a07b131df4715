//! Truncated p-adic numbers with explicit precision tracking, Teichmüller
//! lifts and two-prime CRT representatives.
//!
//! A nonzero [`PadicNumber`] is `p^v * u + O(p^(v+N))` with `u` a unit
//! residue mod `p^N`. Zero comes in two flavours: the exact zero and an
//! approximate zero `O(p^A)` that arises from cancellation.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::modular::{crt, mod_floor, mod_inv, pow_i, pow_u, require_prime, split_vp, to_bigint};
use crate::rational::{int_rat, rat, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    ExactZero,
    Approx(i64),
    Value { v: i64, unit: BigUint, prec: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePair {
    p: u64,
    q: u64,
}

impl PrimePair {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        require_prime(p)?;
        require_prime(q)?;
        if p == q {
            return invalid(format!("prime pair needs distinct primes, got {p} twice"));
        }
        Ok(PrimePair { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn swapped(&self) -> Self {
        PrimePair { p: self.q, q: self.p }
    }
}

impl PadicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PadicNumber { p, repr: Repr::ExactZero }
    }

    /// `O(p^abs_prec)`.
    pub fn approx_zero(p: u64, abs_prec: i64) -> Self {
        PadicNumber { p, repr: Repr::Approx(abs_prec) }
    }

    /// `x` with `prec` digits of relative precision.
    pub fn from_rational(x: &BigRational, p: u64, prec: u32) -> Result<Self> {
        require_prime(p)?;
        if prec == 0 {
            return invalid("precision must be at least 1");
        }
        if x.is_zero() {
            return Ok(Self::exact_zero(p));
        }
        let (vn, un) = split_vp(x.numer(), p);
        let (vd, ud) = split_vp(x.denom(), p);
        let m = pow_u(p, prec);
        let inv = mod_inv(&ud, &m).expect("cofactor is a unit");
        let unit = mod_floor(&(un * to_bigint(&inv)), &m);
        Ok(PadicNumber {
            p,
            repr: Repr::Value { v: vn as i64 - vd as i64, unit, prec },
        })
    }

    pub fn from_int(n: i64, p: u64, prec: u32) -> Result<Self> {
        Self::from_rational(&rat(n), p, prec)
    }

    /// A p-integral rational known only modulo `p^abs_prec`.
    pub fn from_rational_abs(x: &BigRational, p: u64, abs_prec: i64) -> Result<Self> {
        require_prime(p)?;
        if x.is_zero() {
            return Ok(Self::approx_zero(p, abs_prec));
        }
        let (vn, _) = split_vp(x.numer(), p);
        let (vd, _) = split_vp(x.denom(), p);
        let v = vn as i64 - vd as i64;
        if v >= abs_prec {
            return Ok(Self::approx_zero(p, abs_prec));
        }
        Self::from_rational(x, p, (abs_prec - v) as u32)
    }

    /// The integer `r` known modulo `p^abs_prec`.
    pub fn from_residue(r: &BigInt, p: u64, abs_prec: u32) -> Result<Self> {
        Self::from_rational_abs(&int_rat(r.clone()), p, abs_prec as i64)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `None` for both kinds of zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Value { v, .. } => Some(*v),
            _ => None,
        }
    }

    /// Unit part, zero for zeros.
    pub fn unit(&self) -> BigUint {
        match &self.repr {
            Repr::Value { unit, .. } => unit.clone(),
            _ => BigUint::zero(),
        }
    }

    /// Relative precision `N`; zero for zeros.
    pub fn relative_precision(&self) -> u32 {
        match &self.repr {
            Repr::Value { prec, .. } => *prec,
            _ => 0,
        }
    }

    /// `v + N`, or `None` for the exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx(a) => Some(*a),
            Repr::Value { v, prec, .. } => Some(v + *prec as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::ExactZero
    }

    /// True for the exact zero and for `O(p^A)`.
    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Value { .. })
    }

    /// `p^-v`; zero for either kind of zero.
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) if v >= 0 => BigRational::new(1.into(), pow_i(self.p, v as u32)),
            Some(v) => int_rat(pow_i(self.p, (-v) as u32)),
        }
    }

    /// An integer representative `p^v * u` when `v >= 0`.
    pub fn lift(&self) -> Result<BigInt> {
        match &self.repr {
            Repr::ExactZero | Repr::Approx(_) => Ok(BigInt::zero()),
            Repr::Value { v, unit, .. } if *v >= 0 => Ok(pow_i(self.p, *v as u32) * to_bigint(unit)),
            Repr::Value { v, .. } => invalid(format!("value has negative valuation {v}")),
        }
    }

    /// The representative as an exact rational, `p^v * u` for any `v`.
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Value { v, unit, .. } if *v < 0 => {
                BigRational::new(to_bigint(unit), pow_i(self.p, (-v) as u32))
            }
            _ => int_rat(self.lift().expect("non-negative valuation")),
        }
    }

    /// `x mod p^m`, failing when `m` exceeds the tracked precision.
    pub fn residue(&self, m: u32) -> Result<BigUint> {
        if let Some(a) = self.absolute_precision() {
            if (m as i64) > a {
                return Err(Error::PrecisionExhausted(format!(
                    "residue mod {}^{m} requested, value known to O({}^{a})",
                    self.p, self.p
                )));
            }
        }
        if self.valuation().is_some_and(|v| v < 0) {
            return invalid("residue of a non-integral value");
        }
        Ok(mod_floor(&self.lift()?, &pow_u(self.p, m)))
    }

    /// `a_0, ..., a_{count-1}` with `x = sum a_i p^i mod p^count`.
    pub fn digits(&self, count: u32) -> Result<Vec<u64>> {
        let mut r = self.residue(count)?;
        let pb = BigUint::from(self.p);
        let mut out = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let (q, d) = r.div_rem(&pb);
            out.push(d.to_u64().expect("digit below p"));
            r = q;
        }
        Ok(out)
    }

    /// Drops digits beyond absolute precision `a`.
    pub fn truncate(&self, a: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => Self::approx_zero(self.p, a),
            Repr::Approx(b) => Self::approx_zero(self.p, a.min(*b)),
            Repr::Value { v, unit, prec } => {
                if *v >= a {
                    return Self::approx_zero(self.p, a);
                }
                let np = (*prec as i64).min(a - v) as u32;
                PadicNumber {
                    p: self.p,
                    repr: Repr::Value { v: *v, unit: unit % pow_u(self.p, np), prec: np },
                }
            }
        }
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return invalid(format!("mixed primes {} and {}", self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let a = match (self.absolute_precision(), other.absolute_precision()) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(x), Some(y)) => x.min(y),
        };
        let (vx, vy) = (self.valuation(), other.valuation());
        let m = match (vx, vy) {
            (None, None) => return Ok(Self::approx_zero(self.p, a)),
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) => x.min(y),
        };
        if m >= a {
            return Ok(Self::approx_zero(self.p, a));
        }
        let term = |x: &Self| -> BigInt {
            match x.valuation() {
                Some(v) => pow_i(x.p, (v - m) as u32) * to_bigint(&x.unit()),
                None => BigInt::zero(),
            }
        };
        let sum = term(self) + term(other);
        let scale = |s: BigInt| -> BigRational {
            if m >= 0 {
                int_rat(s * pow_i(self.p, m as u32))
            } else {
                BigRational::new(s, pow_i(self.p, (-m) as u32))
            }
        };
        Self::from_rational_abs(&scale(sum), self.p, a)
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Value { v, unit, prec } => {
                let m = pow_u(self.p, *prec);
                PadicNumber {
                    p: self.p,
                    repr: Repr::Value { v: *v, unit: (&m - unit) % &m, prec: *prec },
                }
            }
            _ => self.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let p = self.p;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(p),
            (Repr::Approx(a), Repr::Approx(b)) => Self::approx_zero(p, a + b),
            (Repr::Approx(a), Repr::Value { v, .. }) | (Repr::Value { v, .. }, Repr::Approx(a)) => {
                Self::approx_zero(p, a + v)
            }
            (
                Repr::Value { v: v1, unit: u1, prec: n1 },
                Repr::Value { v: v2, unit: u2, prec: n2 },
            ) => {
                let prec = (*n1).min(*n2);
                PadicNumber {
                    p,
                    repr: Repr::Value { v: v1 + v2, unit: (u1 * u2) % pow_u(p, prec), prec },
                }
            }
        })
    }

    /// Multiplicative inverse of a unit (`v = 0`).
    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Value { v: 0, unit, prec } => {
                let m = pow_u(self.p, *prec);
                let inv = mod_inv(&to_bigint(unit), &m).expect("unit is invertible");
                Ok(PadicNumber { p: self.p, repr: Repr::Value { v: 0, unit: inv, prec: *prec } })
            }
            _ => Err(Error::NonUnitDivision { p: self.p }),
        }
    }

    /// `self / other` for a unit `other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::from_int(1, self.p, self.relative_precision().max(1))?;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `min(v(self - other), known precision)`: the exponent up to which the
    /// two values are known to agree. `None` means both are the same exact value.
    pub fn agreement(&self, other: &Self) -> Result<Option<i64>> {
        let d = self.sub(other)?;
        Ok(match d.repr {
            Repr::ExactZero => None,
            Repr::Approx(a) => Some(a),
            Repr::Value { v, .. } => Some(v),
        })
    }

    /// True when `self` and `other` agree modulo `p^m`.
    pub fn congruent(&self, other: &Self, m: i64) -> Result<bool> {
        Ok(self.agreement(other)?.is_none_or(|a| a >= m))
    }

    /// `(v, unit, N)_p`.
    pub fn to_triple_string(&self) -> String {
        match &self.repr {
            Repr::ExactZero => format!("0_{}", self.p),
            Repr::Approx(a) => format!("O({}^{})", self.p, a),
            Repr::Value { v, unit, prec } => format!("({v}, {unit}, {prec})_{}", self.p),
        }
    }

    fn from_triple(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed triple {s:?}"));
        let (body, p) = s.rsplit_once(")_").ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let body = body.trim().strip_prefix('(').ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: i64 = parts[0].parse().map_err(|_| bad())?;
        let unit: BigUint = parts[1].parse().map_err(|_| bad())?;
        let prec: u32 = parts[2].parse().map_err(|_| bad())?;
        require_prime(p)?;
        if prec == 0 || unit >= pow_u(p, prec) || (&unit % p).is_zero() {
            return Err(Error::Parse(format!("{s:?} does not carry a unit below p^N")));
        }
        Ok(PadicNumber { p, repr: Repr::Value { v, unit, prec } })
    }

    fn from_digit_string(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::Parse(format!("malformed term {t:?} in {s:?}"));
        let mut p: Option<u64> = None;
        let mut abs: Option<i64> = None;
        let mut terms: Vec<(BigInt, i64)> = Vec::new();
        let mut set_p = |q: u64, t: &str| -> Result<()> {
            match p {
                Some(old) if old != q => Err(bad(t)),
                _ => {
                    p = Some(q);
                    Ok(())
                }
            }
        };
        for term in s.split('+').map(str::trim) {
            if let Some(inner) = term.strip_prefix("O(").and_then(|t| t.strip_suffix(')')) {
                let (base, e) = inner.split_once('^').unwrap_or((inner, "1"));
                set_p(base.trim().parse().map_err(|_| bad(term))?, term)?;
                abs = Some(e.trim().parse().map_err(|_| bad(term))?);
                continue;
            }
            let term_n = term.replace('·', "*");
            let (coef, power) = match term_n.split_once('*') {
                Some((c, pw)) => (c.trim(), Some(pw.trim())),
                None if term_n.contains('^') => ("1", Some(term_n.as_str())),
                None => (term_n.as_str(), None),
            };
            let c: BigInt = coef.parse().map_err(|_| bad(term))?;
            let e = match power {
                None => 0,
                Some(pw) => {
                    let (base, e) = pw.split_once('^').unwrap_or((pw, "1"));
                    set_p(base.trim().parse().map_err(|_| bad(term))?, term)?;
                    e.trim().parse().map_err(|_| bad(term))?
                }
            };
            terms.push((c, e));
        }
        let p = p.ok_or_else(|| Error::Parse(format!("no prime visible in {s:?}")))?;
        let abs = abs.ok_or_else(|| Error::Parse(format!("missing O(p^N) term in {s:?}")))?;
        let mut x = BigRational::zero();
        for (c, e) in terms {
            let pe = if e >= 0 {
                int_rat(pow_i(p, e as u32))
            } else {
                BigRational::new(BigInt::one(), pow_i(p, (-e) as u32))
            };
            x += int_rat(c) * pe;
        }
        Self::from_rational_abs(&x, p, abs)
    }
}

impl fmt::Display for PadicNumber {
    /// `a_v*p^v + ... + O(p^(v+N))`, omitting zero digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        let (v, unit, prec) = match &self.repr {
            Repr::ExactZero => return write!(f, "0"),
            Repr::Approx(a) => return write!(f, "O({p}^{a})"),
            Repr::Value { v, unit, prec } => (*v, unit.clone(), *prec),
        };
        let pb = BigUint::from(p);
        let mut r = unit;
        let mut parts = Vec::new();
        for i in 0..prec as i64 {
            let (q, d) = r.div_rem(&pb);
            r = q;
            if d.is_zero() {
                continue;
            }
            let e = v + i;
            parts.push(match e {
                0 => d.to_string(),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{e}"),
            });
        }
        parts.push(format!("O({p}^{})", v + prec as i64));
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for PadicNumber {
    type Err = Error;

    /// Accepts both the digit form and the `(v, unit, N)_p` triple.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            return Self::from_triple(s);
        }
        if let Some(p) = s.strip_prefix("0_") {
            let p: u64 = p.parse().map_err(|_| Error::Parse(s.to_string()))?;
            require_prime(p)?;
            return Ok(Self::exact_zero(p));
        }
        Self::from_digit_string(s)
    }
}

pub fn padic_of_rational(x: &BigRational, p: u64, prec: u32) -> Result<PadicNumber> {
    PadicNumber::from_rational(x, p, prec)
}

pub fn padic_norm(x: &PadicNumber) -> BigRational {
    x.norm()
}

/// The `(p-1)`-st root of unity congruent to `n` mod `p`, reduced mod `p^prec`,
/// found as the fixed point of `x -> x^p`.
pub fn teichmuller(n: i64, p: u64, prec: u32) -> Result<BigUint> {
    require_prime(p)?;
    if n.rem_euclid(p as i64) == 0 {
        return invalid(format!("teichmuller needs p ∤ n, got n={n}, p={p}"));
    }
    let m = pow_u(p, prec);
    let pe = BigUint::from(p);
    let mut x = mod_floor(&BigInt::from(n), &m);
    for _ in 0..=prec {
        let next = x.modpow(&pe, &m);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    debug_assert_eq!(x.modpow(&pe, &m), x);
    Ok(x)
}

/// Like [`teichmuller`] but returns 0 when `p | n`.
pub fn teichmuller_total(n: i64, p: u64, prec: u32) -> Result<BigUint> {
    require_prime(p)?;
    if n.rem_euclid(p as i64) == 0 {
        return Ok(BigUint::zero());
    }
    teichmuller(n, p, prec)
}

/// The residue mod `p^m q^l` agreeing with `a` mod `p^m` and `b` mod `q^l`.
pub fn crt_pair(a: &BigUint, b: &BigUint, pair: PrimePair, m: u32, l: u32) -> BigUint {
    let mp = pow_u(pair.p, m);
    let mq = pow_u(pair.q, l);
    crt(&(a % &mp), &mp, &(b % &mq), &mq).expect("distinct prime powers are coprime")
}

fn check_coprime(n: i64, pair: PrimePair) -> Result<()> {
    if n.rem_euclid(pair.p as i64) == 0 || n.rem_euclid(pair.q as i64) == 0 {
        return invalid(format!("{n} must be prime to {} and {}", pair.p, pair.q));
    }
    Ok(())
}

/// CRT combination of the two Teichmüller lifts of `n`, modulo `p^m q^l`.
pub fn double_teichmuller(n: i64, pair: PrimePair, m: u32, l: u32) -> Result<BigUint> {
    check_coprime(n, pair)?;
    let wp = teichmuller(n, pair.p, m)?;
    let wq = teichmuller(n, pair.q, l)?;
    Ok(crt_pair(&wp, &wq, pair, m, l))
}

/// `b / ω_{p,q}(b)` in each of `Z_p / p^m` and `Z_q / q^l`.
pub fn angle_bracket(b: i64, pair: PrimePair, m: u32, l: u32) -> Result<(PadicNumber, PadicNumber)> {
    let w = to_bigint(&double_teichmuller(b, pair, m, l)?);
    let side = |p: u64, prec: u32| -> Result<PadicNumber> {
        let bp = PadicNumber::from_int(b, p, prec)?;
        let wp = PadicNumber::from_residue(&w, p, prec)?;
        bp.div(&wp)
    };
    Ok((side(pair.p, m)?, side(pair.q, l)?))
}

/// The exponent `r` with `m Z` shadowing to `p^r Z_p`, i.e. `v_p(m)`.
pub fn ideal_shadow(m: u64, p: u64) -> Result<u32> {
    require_prime(p)?;
    if m == 0 {
        return invalid("ideal_shadow needs m >= 1");
    }
    Ok(crate::modular::vp_u64(m, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pn(n: i64, d: i64, p: u64, prec: u32) -> PadicNumber {
        PadicNumber::from_rational(&ratio(n, d), p, prec).unwrap()
    }

    #[test]
    fn rational_constructor() {
        let x = pn(1, 3, 5, 3);
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.unit(), BigUint::from(42u32));
        assert!(pn(0, 1, 7, 4).is_exact_zero());
        let y = pn(50, 1, 5, 2);
        assert_eq!((y.valuation(), y.unit()), (Some(2), BigUint::from(2u32)));
    }

    #[test]
    fn norms() {
        assert_eq!(pn(50, 1, 5, 2).norm(), ratio(1, 25));
        assert_eq!(PadicNumber::exact_zero(5).norm(), rat(0));
        assert_eq!(pn(1, 3, 3, 2).norm(), rat(3));
    }

    #[test]
    fn digit_expansions() {
        assert_eq!(pn(1, 3, 5, 3).digits(3).unwrap(), vec![2, 3, 1]);
        assert_eq!(pn(7, 1, 5, 2).digits(2).unwrap(), vec![2, 1]);
        assert_eq!(PadicNumber::exact_zero(5).digits(4).unwrap(), vec![0; 4]);
        assert!(pn(1, 3, 5, 3).digits(4).is_err());
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 5, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(teichmuller(2, 5, 3).unwrap(), BigUint::from(57u32));
        assert_eq!(teichmuller(2, 3, 4).unwrap(), BigUint::from(80u32));
        assert!(teichmuller(10, 5, 3).is_err());
        assert!(teichmuller_total(10, 5, 3).unwrap().is_zero());
    }

    #[test]
    fn crt_and_double_lifts() {
        let pair = PrimePair::new(3, 5).unwrap();
        let c = crt_pair(&BigUint::from(2u32), &BigUint::from(3u32), pair, 2, 2);
        assert_eq!(c, BigUint::from(128u32));
        assert_eq!(double_teichmuller(1, pair, 3, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(double_teichmuller(2, pair, 2, 2).unwrap(), BigUint::from(107u32));
        assert_eq!(double_teichmuller(4, pair, 1, 1).unwrap(), BigUint::from(4u32));
        assert!(double_teichmuller(6, pair, 1, 1).is_err());
    }

    #[test]
    fn angle_brackets_are_principal_units() {
        let pair = PrimePair::new(3, 5).unwrap();
        let (a, b) = angle_bracket(2, pair, 2, 2).unwrap();
        assert_eq!(a.residue(1).unwrap(), BigUint::from(1u32));
        assert_eq!(b.residue(1).unwrap(), BigUint::from(1u32));
        let (a, b) = angle_bracket(7, pair, 1, 1).unwrap();
        assert_eq!((a.unit(), b.unit()), (BigUint::from(1u32), BigUint::from(1u32)));
        let (a, b) = angle_bracket(1, pair, 3, 3).unwrap();
        assert_eq!((a.unit(), b.unit()), (BigUint::from(1u32), BigUint::from(1u32)));
    }

    #[test]
    fn ideal_shadows() {
        assert_eq!(ideal_shadow(12, 2).unwrap(), 2);
        assert_eq!(ideal_shadow(7, 5).unwrap(), 0);
        assert_eq!(ideal_shadow(125, 5).unwrap(), 3);
    }

    #[test]
    fn cancellation_loses_precision() {
        let x = pn(1, 1, 5, 4);
        let y = pn(26, 1, 5, 4);
        let d = y.sub(&x).unwrap();
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.absolute_precision(), Some(4));
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.absolute_precision(), Some(4));
    }

    #[test]
    fn non_unit_division_is_rejected() {
        let x = pn(1, 1, 5, 4);
        assert_eq!(x.div(&pn(5, 1, 5, 4)), Err(Error::NonUnitDivision { p: 5 }));
        assert_eq!(x.div(&pn(3, 1, 5, 4)).unwrap(), pn(1, 3, 5, 4));
    }

    #[test]
    fn text_round_trips() {
        for x in [pn(1, 3, 5, 3), pn(-7, 25, 5, 6), pn(50, 1, 5, 2), PadicNumber::approx_zero(7, 3)] {
            let s = x.to_string();
            assert_eq!(s.parse::<PadicNumber>().unwrap(), x, "{s}");
            let t = x.to_triple_string();
            assert_eq!(t.parse::<PadicNumber>().unwrap(), x, "{t}");
        }
        assert_eq!(pn(1, 3, 5, 3).to_string(), "2 + 3*5 + 1*5^2 + O(5^3)");
        assert_eq!(pn(1, 3, 5, 3).to_triple_string(), "(0, 42, 3)_5");
        let e = PadicNumber::exact_zero(5);
        assert_eq!(e.to_triple_string().parse::<PadicNumber>().unwrap(), e);
        assert_eq!("2 + 3·5 + 5^2 + O(5^3)".parse::<PadicNumber>().unwrap(), pn(1, 3, 5, 3));
    }
}
