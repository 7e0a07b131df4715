//! Layered Markov chains (basic, gamma, beta in the p-adic, q and real
//! worlds), exact layer propagation, the q → p and q → 1 limits, the real
//! Hahn ladder and q-numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::modular::{crt, pow_u, require_prime, to_bigint};
use crate::padic::PadicNumber;
use crate::rational::{binomial, int_rat, rat, rising_factorial, BigRational};

/// A probability or parameter: exact while every operation stays rational,
/// a float once a non-integral power is taken.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Exact(rat(n))
    }

    pub fn zero() -> Self {
        Value::int(0)
    }

    pub fn one() -> Self {
        Value::int(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => x.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Float(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Value::Exact(x) => x.is_positive(),
            Value::Float(x) => *x > 0.0,
        }
    }

    /// `self^e`; exact when both are exact and `e` is an integer.
    pub fn pow(&self, e: &Value) -> Value {
        if let (Value::Exact(b), Value::Exact(x)) = (self, e) {
            if x.is_integer() {
                if let Some(k) = x.to_integer().to_i32() {
                    if !(b.is_zero() && k < 0) {
                        return Value::Exact(num_traits::pow::Pow::pow(b, k));
                    }
                }
            }
        }
        Value::Float(self.to_f64().powf(e.to_f64()))
    }

    pub fn abs_diff(&self, other: &Value) -> f64 {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => (a - b).abs().to_f64().unwrap_or(f64::INFINITY),
            _ => (self.to_f64() - other.to_f64()).abs(),
        }
    }
}

macro_rules! value_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Value> for &Value {
            type Output = Value;
            fn $m(self, rhs: &Value) -> Value {
                match (self, rhs) {
                    (Value::Exact(a), Value::Exact(b)) => Value::Exact(a $op b),
                    _ => Value::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Value> for Value {
            type Output = Value;
            fn $m(self, rhs: Value) -> Value {
                &self $op &rhs
            }
        }
    };
}

value_op!(Add, add, +);
value_op!(Sub, sub, -);
value_op!(Mul, mul, *);
value_op!(Div, div, /);

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(-a),
            Value::Float(a) => Value::Float(-a),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Float(x) => write!(f, "{x:.17e}"),
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    /// `3`, `-1/2` and plain decimals such as `0.25` are exact; anything
    /// else that parses as `f64` is a float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(x) = s.parse::<BigRational>() {
            return Ok(Value::Exact(x));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let digits = whole.trim_start_matches('-');
            if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) && digits.bytes().all(|b| b.is_ascii_digit()) {
                let num: BigInt = format!("{whole}{frac}").parse().map_err(|_| Error::Parse(s.into()))?;
                let den = num_traits::pow(BigInt::from(10), frac.len());
                return Ok(Value::Exact(BigRational::new(num, den)));
            }
        }
        s.parse::<f64>().map(Value::Float).map_err(|_| Error::Parse(format!("not a number: {s:?}")))
    }
}

pub type State = (u64, u64);

/// A transition kernel on states `(i, j)`, started at `(0, 0)`.
pub trait ChainKernel: Send + Sync + fmt::Debug {
    fn family(&self) -> &'static str;

    /// The `family:params` string that rebuilds this kernel.
    fn spec(&self) -> String;

    /// Outgoing transitions with their probabilities.
    fn successors(&self, s: State) -> Vec<(State, Value)>;

    fn transition(&self, from: State, to: State) -> Value {
        self.successors(from)
            .into_iter()
            .filter(|(t, _)| *t == to)
            .fold(Value::zero(), |acc, (_, w)| &acc + &w)
    }
}

fn positive(name: &str, v: &Value) -> Result<()> {
    if !v.is_positive() {
        return invalid(format!("{name} must be positive, got {v}"));
    }
    Ok(())
}

fn unit_interval(q: &Value) -> Result<()> {
    let f = q.to_f64();
    if !(q.is_positive() && f < 1.0) {
        return invalid(format!("q must lie in (0, 1), got {q}"));
    }
    Ok(())
}

fn idx(k: u64) -> Value {
    Value::int(k as i64)
}

#[derive(Debug, Clone)]
pub struct PadicBeta {
    p: u64,
    alpha: Value,
    beta: Value,
}

pub fn kernel_padic_beta(p: u64, alpha: Value, beta: Value) -> Result<PadicBeta> {
    require_prime(p)?;
    positive("alpha", &alpha)?;
    positive("beta", &beta)?;
    Ok(PadicBeta { p, alpha, beta })
}

impl ChainKernel for PadicBeta {
    fn family(&self) -> &'static str {
        "p-beta"
    }

    fn spec(&self) -> String {
        format!("p-beta:p={},alpha={},beta={}", self.p, self.alpha, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        let p = idx(self.p);
        let pb = p.pow(&-&self.beta);
        let one = Value::one();
        match (i, j) {
            (0, 0) => {
                let pab = p.pow(&-&(&self.alpha + &self.beta));
                let pa = p.pow(&-&self.alpha);
                vec![
                    ((0, 1), (&one - &pb) / (&one - &pab)),
                    ((1, 0), (&one - &pa) * pb / (&one - &pab)),
                ]
            }
            (i, 0) => vec![((i + 1, 0), pb.clone()), ((i, 1), &one - &pb)],
            (i, j) => vec![((i, j + 1), one)],
        }
    }
}

/// The `α → ∞` limit of the p-adic beta chain.
#[derive(Debug, Clone)]
pub struct PadicGamma {
    p: u64,
    beta: Value,
}

pub fn kernel_padic_gamma(p: u64, beta: Value) -> Result<PadicGamma> {
    require_prime(p)?;
    positive("beta", &beta)?;
    Ok(PadicGamma { p, beta })
}

impl ChainKernel for PadicGamma {
    fn family(&self) -> &'static str {
        "p-gamma"
    }

    fn spec(&self) -> String {
        format!("p-gamma:p={},beta={}", self.p, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        let pb = idx(self.p).pow(&-&self.beta);
        if j == 0 {
            vec![((i + 1, 0), pb.clone()), ((i, 1), &Value::one() - &pb)]
        } else {
            vec![((i, j + 1), Value::one())]
        }
    }
}

#[derive(Debug, Clone)]
pub struct QBeta {
    q: Value,
    alpha: Value,
    beta: Value,
}

pub fn kernel_q_beta(q: Value, alpha: Value, beta: Value) -> Result<QBeta> {
    unit_interval(&q)?;
    positive("alpha", &alpha)?;
    positive("beta", &beta)?;
    Ok(QBeta { q, alpha, beta })
}

impl ChainKernel for QBeta {
    fn family(&self) -> &'static str {
        "q-beta"
    }

    fn spec(&self) -> String {
        format!("q-beta:q={},alpha={},beta={}", self.q, self.alpha, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        let one = Value::one();
        let qb = self.q.pow(&(&self.beta + &idx(j)));
        let qa = self.q.pow(&(&self.alpha + &idx(i)));
        let den = &one - &self.q.pow(&(&(&self.alpha + &self.beta) + &idx(i + j)));
        vec![((i, j + 1), (&one - &qb) / den.clone()), ((i + 1, j), (&one - &qa) * qb / den)]
    }
}

#[derive(Debug, Clone)]
pub struct RealBeta {
    alpha: Value,
    beta: Value,
}

pub fn kernel_real_beta(alpha: Value, beta: Value) -> Result<RealBeta> {
    positive("alpha", &alpha)?;
    positive("beta", &beta)?;
    Ok(RealBeta { alpha, beta })
}

impl ChainKernel for RealBeta {
    fn family(&self) -> &'static str {
        "real-beta"
    }

    fn spec(&self) -> String {
        format!("real-beta:alpha={},beta={}", self.alpha, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        let den = &(&self.alpha + &self.beta) + &idx(2 * (i + j));
        vec![
            ((i, j + 1), (&self.beta + &idx(2 * j)) / den.clone()),
            ((i + 1, j), (&self.alpha + &idx(2 * i)) / den),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct QGamma {
    q: Value,
    beta: Value,
}

pub fn kernel_q_gamma(q: Value, beta: Value) -> Result<QGamma> {
    unit_interval(&q)?;
    positive("beta", &beta)?;
    Ok(QGamma { q, beta })
}

impl ChainKernel for QGamma {
    fn family(&self) -> &'static str {
        "q-gamma"
    }

    fn spec(&self) -> String {
        format!("q-gamma:q={},beta={}", self.q, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        let qb = self.q.pow(&(&self.beta + &idx(j)));
        vec![((i + 1, j), qb.clone()), ((i, j + 1), &Value::one() - &qb)]
    }
}

/// The basic chain on `N`, states `(i, 0)`.
#[derive(Debug, Clone)]
pub struct Basic {
    q: Value,
    beta: Value,
}

pub fn kernel_basic(q: Value, beta: Value) -> Result<Basic> {
    unit_interval(&q)?;
    positive("beta", &beta)?;
    Ok(Basic { q, beta })
}

impl ChainKernel for Basic {
    fn family(&self) -> &'static str {
        "basic"
    }

    fn spec(&self) -> String {
        format!("basic:q={},beta={}", self.q, self.beta)
    }

    fn successors(&self, (i, _): State) -> Vec<(State, Value)> {
        let stay = self.q.pow(&(&self.beta + &idx(i)));
        vec![((i, 0), stay.clone()), ((i + 1, 0), &Value::one() - &stay)]
    }
}

/// The chain on `{(N, j) : j <= N}` with `u^-β` in place of `p^-β`.
#[derive(Debug, Clone)]
pub struct UGamma {
    u: BigInt,
    beta: u32,
}

pub fn kernel_u_gamma(u: BigInt, beta: u32) -> Result<UGamma> {
    if u < BigInt::from(2) || beta == 0 {
        return invalid(format!("need u >= 2 and beta >= 1, got u={u}, beta={beta}"));
    }
    Ok(UGamma { u, beta })
}

impl UGamma {
    pub fn u_neg_beta(&self) -> BigRational {
        BigRational::new(BigInt::one(), num_traits::pow(self.u.clone(), self.beta as usize))
    }
}

impl ChainKernel for UGamma {
    fn family(&self) -> &'static str {
        "u-gamma"
    }

    fn spec(&self) -> String {
        format!("u-gamma:u={},beta={}", self.u, self.beta)
    }

    fn successors(&self, (i, j): State) -> Vec<(State, Value)> {
        if j == 0 {
            let w = self.u_neg_beta();
            vec![((i + 1, 0), Value::Exact(w.clone())), ((i + 1, 1), Value::Exact(rat(1) - w))]
        } else {
            vec![((i + 1, j + 1), Value::one())]
        }
    }
}

/// `u ≡ p mod p^m` for every `p` in `primes`.
pub fn crt_u(primes: &[u64], m: u32) -> Result<BigInt> {
    let mut acc = num_bigint::BigUint::zero();
    let mut modulus = num_bigint::BigUint::one();
    for &p in primes {
        require_prime(p)?;
        let pm = pow_u(p, m);
        acc = crt(&acc, &modulus, &num_bigint::BigUint::from(p % pm.to_u64().unwrap_or(u64::MAX).max(1)), &pm)
            .ok_or_else(|| Error::InvalidArgument("primes must be distinct".into()))?;
        modulus *= pm;
    }
    // u = p itself when the set has a single prime; lift so u >= 2 always
    if acc < num_bigint::BigUint::from(2u32) {
        acc += &modulus;
    }
    Ok(to_bigint(&acc))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UShadow {
    pub p: u64,
    /// `v_p(u^-β)`.
    pub valuation: i64,
    /// Digits to which `u^-β` and `p^-β` agree, relative to `p^-β`.
    pub agreement: i64,
}

/// Compares `u^-β` with `p^-β` in `Q_p` to `m - 1` relative digits.
pub fn u_gamma_shadow(u: &BigInt, beta: u32, p: u64, m: u32) -> Result<UShadow> {
    let kernel = kernel_u_gamma(u.clone(), beta)?;
    let prec = m.saturating_sub(1).max(1);
    let w = PadicNumber::from_rational(&kernel.u_neg_beta(), p, prec)?;
    let target = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), beta as usize));
    let t = PadicNumber::from_rational(&target, p, prec)?;
    let valuation = w.valuation().unwrap_or(i64::MAX);
    let agreement = w.agreement(&t)?.map_or(i64::MAX, |a| a - valuation);
    Ok(UShadow { p, valuation, agreement })
}

/// Rejects kernels that are not row-stochastic on the states reachable in
/// `depth` steps; exact rows must sum to 1, float rows to within `1e-12`.
pub fn check_stochastic(kernel: &dyn ChainKernel, depth: u64) -> Result<()> {
    let mut frontier = vec![(0u64, 0u64)];
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..=depth {
        let mut next = Vec::new();
        for s in frontier {
            if !seen.insert(s) {
                continue;
            }
            let succ = kernel.successors(s);
            let mut total = Value::zero();
            for (t, w) in &succ {
                let f = w.to_f64();
                if !(-1e-12..=1.0 + 1e-12).contains(&f) {
                    return invalid(format!("{}: P({s:?} -> {t:?}) = {w} outside [0, 1]", kernel.spec()));
                }
                total = &total + w;
                next.push(*t);
            }
            let ok = match &total {
                Value::Exact(x) => x.is_one(),
                Value::Float(x) => (x - 1.0).abs() <= 1e-12,
            };
            if !ok {
                return invalid(format!("{}: row {s:?} sums to {total}", kernel.spec()));
            }
        }
        frontier = next;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerDistribution {
    pub n: u64,
    pub weights: BTreeMap<State, Value>,
}

impl LayerDistribution {
    pub fn total(&self) -> Value {
        self.weights.values().fold(Value::zero(), |acc, w| &acc + w)
    }

    /// Weights keyed by `j`.
    pub fn by_j(&self) -> BTreeMap<u64, Value> {
        let mut out = BTreeMap::new();
        for ((_, j), w) in &self.weights {
            let e = out.entry(*j).or_insert_with(Value::zero);
            *e = &*e + w;
        }
        out
    }
}

/// Law of the chain after `n` steps from `(0, 0)`.
pub fn propagate(kernel: &dyn ChainKernel, n: u64) -> LayerDistribution {
    let mut weights = BTreeMap::from([((0u64, 0u64), Value::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<State, Value> = BTreeMap::new();
        for (s, w) in &weights {
            for (t, pr) in kernel.successors(*s) {
                let e = next.entry(t).or_insert_with(Value::zero);
                *e = &*e + &(w * &pr);
            }
        }
        weights = next;
    }
    LayerDistribution { n, weights }
}

/// `τ(i,j) = C(n,i) (α/2)_i (β/2)_j / ((α+β)/2)_n` on the layer `i + j = n`.
pub fn real_beta_layer_closed_form(alpha: &BigRational, beta: &BigRational, n: u64) -> Result<LayerDistribution> {
    if !alpha.is_positive() || !beta.is_positive() {
        return invalid("alpha and beta must be positive");
    }
    let two = rat(2);
    let (ha, hb) = (alpha / &two, beta / &two);
    let norm = rising_factorial(&(&ha + &hb), n);
    let weights = (0..=n)
        .map(|j| {
            let i = n - j;
            let w = int_rat(binomial(n, i as i64)) * rising_factorial(&ha, i) * rising_factorial(&hb, j) / &norm;
            ((i, j), Value::Exact(w))
        })
        .collect();
    Ok(LayerDistribution { n, weights })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitTarget {
    /// `q = p^-N`, `α/N`, `β/N` against the p-adic beta chain.
    Padic { p: u64 },
    /// `q = q0^(2/N)`, `α/2`, `β/2` against the real beta chain.
    Real { q0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub n: u32,
    pub sup_error: f64,
    /// The up-step at `(0, 0)`.
    pub root_up: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub target: LimitTarget,
    pub rows: Vec<LimitRow>,
    pub tol: f64,
    /// Errors never increase along the schedule and decrease while nonzero.
    pub monotone: bool,
}

impl LimitReport {
    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.sup_error)
    }

    pub fn passed(&self) -> bool {
        self.monotone && self.final_error() < self.tol
    }
}

/// Sup of `|P_q - P_target|` over states with `i + j <= depth`, for each `N`
/// in the schedule.
pub fn limit_check(target: LimitTarget, alpha: f64, beta: f64, schedule: &[u32], depth: u64, tol: f64) -> Result<LimitReport> {
    if schedule.is_empty() {
        return invalid("empty schedule");
    }
    let (a, b) = (Value::Float(alpha), Value::Float(beta));
    let reference: Box<dyn ChainKernel> = match target {
        LimitTarget::Padic { p } => Box::new(kernel_padic_beta(p, a.clone(), b.clone())?),
        LimitTarget::Real { q0 } => {
            if !(0.0 < q0 && q0 < 1.0) {
                return invalid("q0 must lie in (0, 1)");
            }
            Box::new(kernel_real_beta(a.clone(), b.clone())?)
        }
    };
    let mut rows = Vec::new();
    for &n in schedule {
        let nf = n as f64;
        let q = match target {
            LimitTarget::Padic { p } => kernel_q_beta(Value::Float((p as f64).powf(-nf)), Value::Float(alpha / nf), Value::Float(beta / nf))?,
            LimitTarget::Real { q0 } => kernel_q_beta(Value::Float(q0.powf(2.0 / nf)), Value::Float(alpha / 2.0), Value::Float(beta / 2.0))?,
        };
        let mut sup: f64 = 0.0;
        for level in 0..=depth {
            for j in 0..=level {
                let s = (level - j, j);
                for (t, w) in reference.successors(s).into_iter().chain(q.successors(s)) {
                    sup = sup.max(q.transition(s, t).abs_diff(&reference.transition(s, t)));
                    let _ = w;
                }
            }
        }
        rows.push(LimitRow { n, sup_error: sup, root_up: q.transition((0, 0), (0, 1)).to_f64() });
    }
    let monotone = rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error || w[1].sup_error == 0.0);
    Ok(LimitReport { target, rows, tol, monotone })
}

/// `(D_n φ)(i,j) = ((α+β)/2 + n)(φ(i,j+1) - φ(i+1,j))`, from layer `n`
/// (vectors indexed by `j`) to layer `n - 1`.
pub fn d_op(alpha: &BigRational, beta: &BigRational, n: u64, phi: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(phi.len() as u64, n + 1);
    let c = (alpha + beta) / rat(2) + rat(n as i64);
    (0..n as usize).map(|j| &c * (&phi[j + 1] - &phi[j])).collect()
}

/// `(D_n^+ φ)(i,j) = ((α+β)/2 + n)^-1 (j(α/2+i)φ(i,j-1) - i(β/2+j)φ(i-1,j))`,
/// from layer `n - 1` to layer `n`.
pub fn d_plus(alpha: &BigRational, beta: &BigRational, n: u64, phi: &[BigRational]) -> Vec<BigRational> {
    assert_eq!(phi.len() as u64, n);
    let c = (alpha + beta) / rat(2) + rat(n as i64);
    let (ha, hb) = (alpha / rat(2), beta / rat(2));
    (0..=n)
        .map(|j| {
            let i = n - j;
            let mut v = BigRational::zero();
            if j >= 1 {
                v += rat(j as i64) * (&ha + rat(i as i64)) * &phi[j as usize - 1];
            }
            if i >= 1 {
                v -= rat(i as i64) * (&hb + rat(j as i64)) * &phi[j as usize];
            }
            v / &c
        })
        .collect()
}

/// `D_n D_n^+ - D_(n-1)^+ D_(n-1) - ((α+β)/2) id` applied to `phi` on layer
/// `n - 1` of `H^(α+2, β+2)`; exactly zero when the relation holds.
pub fn heisenberg_residual(alpha: &BigRational, beta: &BigRational, n: u64, phi: &[BigRational]) -> Result<Vec<BigRational>> {
    if n == 0 || phi.len() as u64 != n {
        return invalid("need n >= 1 and a vector on layer n - 1");
    }
    let up_down = d_op(alpha, beta, n, &d_plus(alpha, beta, n, phi));
    let (a2, b2) = (alpha + rat(2), beta + rat(2));
    let down_up = if n >= 2 {
        d_plus(&a2, &b2, n - 1, &d_op(&a2, &b2, n - 1, phi))
    } else {
        vec![BigRational::zero(); phi.len()]
    };
    let c = (alpha + beta) / rat(2);
    Ok((0..phi.len()).map(|k| &up_down[k] - &down_up[k] - &c * &phi[k]).collect())
}

/// `φ_m = (-1)^m/m! (D^+)^m 1` on layer `n` for `m = 0..=n`.
pub fn hahn_basis(alpha: &BigRational, beta: &BigRational, n: u64) -> Vec<Vec<BigRational>> {
    (0..=n)
        .map(|m| {
            let mut v = vec![rat(1); (n - m + 1) as usize];
            for k in (1..=m).rev() {
                let shift = rat(2 * (k as i64 - 1));
                v = d_plus(&(alpha + &shift), &(beta + &shift), n - k + 1, &v);
            }
            let fact: BigInt = (1..=m).map(BigInt::from).product();
            let s = BigRational::new(if m % 2 == 0 { BigInt::one() } else { -BigInt::one() }, fact);
            v.into_iter().map(|x| x * &s).collect()
        })
        .collect()
}

/// `sum_j τ(n-j, j) f(j) g(j)`.
pub fn tau_inner(weights: &LayerDistribution, f: &[BigRational], g: &[BigRational]) -> BigRational {
    weights
        .weights
        .iter()
        .map(|((_, j), w)| w.as_exact().expect("closed-form weights are exact") * &f[*j as usize] * &g[*j as usize])
        .sum()
}

/// Gram–Schmidt of `1, j, j^2, ...` under `τ` on layer `n`.
pub fn gram_schmidt_monomials(alpha: &BigRational, beta: &BigRational, n: u64) -> Result<Vec<Vec<BigRational>>> {
    let tau = real_beta_layer_closed_form(alpha, beta, n)?;
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for k in 0..=n {
        let mut v: Vec<BigRational> = (0..=n).map(|j| int_rat(num_traits::pow(BigInt::from(j), k as usize))).collect();
        for u in &out {
            let c = tau_inner(&tau, &v, u) / tau_inner(&tau, u, u);
            v = v.iter().zip(u).map(|(x, y)| x - &c * y).collect();
        }
        out.push(v);
    }
    Ok(out)
}

/// `[s]_q = (1 - q^s)/(1 - q)`.
pub fn q_integer(s: &Value, q: &Value) -> Result<Value> {
    if q.abs_diff(&Value::one()) == 0.0 {
        return invalid("[s]_q is undefined at q = 1; use q_integer_total");
    }
    let one = Value::one();
    Ok((&one - &q.pow(s)) / (&one - q))
}

/// `[s]_q`, extended by its limit `s` at `q = 1`.
pub fn q_integer_total(s: &Value, q: &Value) -> Value {
    q_integer(s, q).unwrap_or_else(|_| s.clone())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QZeta {
    pub value: f64,
    pub terms: usize,
    /// Bound on `|log(tail product)|`.
    pub tail_bound: f64,
}

/// `prod_{n>=0} (1 - q^(s+n))^-1`, stopped once the remaining factors
/// change the product by less than `1e-15` relatively.
pub fn q_zeta(s: f64, q: f64, max_terms: usize) -> Result<QZeta> {
    if !(0.0 < q && q < 1.0) {
        return invalid("q must lie in (0, 1)");
    }
    let mut log = 0.0f64;
    let mut n = 0usize;
    loop {
        let x = q.powf(s + n as f64);
        if x >= 1.0 {
            return Err(Error::Pole(format!("factor 1 - q^(s+{n}) is not positive")));
        }
        // sum_{k>=n} -log(1 - q^(s+k)) <= x / ((1 - x)(1 - q))
        let tail = x / ((1.0 - x) * (1.0 - q));
        if tail < 1e-15 || n >= max_terms {
            return Ok(QZeta { value: log.exp(), terms: n, tail_bound: tail });
        }
        log -= (-x).ln_1p();
        n += 1;
    }
}

/// Parameters of a `family:params` string.
#[derive(Debug, Clone, Default)]
pub struct KernelParams {
    values: BTreeMap<String, String>,
}

impl KernelParams {
    pub fn parse(s: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            if values.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("parameter {k} given twice")));
            }
        }
        Ok(KernelParams { values })
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {key}")))
    }

    pub fn value(&self, key: &str) -> Result<Value> {
        self.raw(key)?.parse()
    }

    pub fn integer<T: FromStr>(&self, key: &str) -> Result<T> {
        let r = self.raw(key)?;
        r.parse().map_err(|_| Error::Parse(format!("{key} must be an integer, got {r:?}")))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => invalid(format!("unknown parameter {k}; expected {}", allowed.join(", "))),
            None => Ok(()),
        }
    }
}

/// Builds one kernel family from its parameters.
pub trait KernelFactory: Send + Sync {
    fn family(&self) -> &'static str;
    fn params(&self) -> &'static [&'static str];
    fn build(&self, params: &KernelParams) -> Result<Box<dyn ChainKernel>>;
}

macro_rules! factory {
    ($name:ident, $family:literal, [$($key:literal),*], |$p:ident| $body:expr) => {
        struct $name;
        impl KernelFactory for $name {
            fn family(&self) -> &'static str {
                $family
            }
            fn params(&self) -> &'static [&'static str] {
                &[$($key),*]
            }
            fn build(&self, $p: &KernelParams) -> Result<Box<dyn ChainKernel>> {
                $p.check_keys(self.params())?;
                Ok(Box::new($body))
            }
        }
    };
}

factory!(PadicBetaFactory, "p-beta", ["p", "alpha", "beta"], |p| kernel_padic_beta(p.integer("p")?, p.value("alpha")?, p.value("beta")?)?);
factory!(PadicGammaFactory, "p-gamma", ["p", "beta"], |p| kernel_padic_gamma(p.integer("p")?, p.value("beta")?)?);
factory!(QBetaFactory, "q-beta", ["q", "alpha", "beta"], |p| kernel_q_beta(p.value("q")?, p.value("alpha")?, p.value("beta")?)?);
factory!(RealBetaFactory, "real-beta", ["alpha", "beta"], |p| kernel_real_beta(p.value("alpha")?, p.value("beta")?)?);
factory!(QGammaFactory, "q-gamma", ["q", "beta"], |p| kernel_q_gamma(p.value("q")?, p.value("beta")?)?);
factory!(BasicFactory, "basic", ["q", "beta"], |p| kernel_basic(p.value("q")?, p.value("beta")?)?);
factory!(UGammaFactory, "u-gamma", ["u", "beta"], |p| kernel_u_gamma(p.integer("u")?, p.integer("beta")?)?);

/// Kernel families by name.
pub struct KernelRegistry {
    factories: BTreeMap<&'static str, Box<dyn KernelFactory>>,
}

impl Default for KernelRegistry {
    fn default() -> Self {
        let mut r = KernelRegistry { factories: BTreeMap::new() };
        r.register(Box::new(PadicBetaFactory));
        r.register(Box::new(PadicGammaFactory));
        r.register(Box::new(QBetaFactory));
        r.register(Box::new(RealBetaFactory));
        r.register(Box::new(QGammaFactory));
        r.register(Box::new(BasicFactory));
        r.register(Box::new(UGammaFactory));
        r
    }
}

impl KernelRegistry {
    pub fn register(&mut self, f: Box<dyn KernelFactory>) {
        self.factories.insert(f.family(), f);
    }

    pub fn families(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn params(&self, family: &str) -> Option<&'static [&'static str]> {
        self.factories.get(family).map(|f| f.params())
    }

    /// Parses `family:key=value,...`.
    pub fn build(&self, spec: &str) -> Result<Box<dyn ChainKernel>> {
        let (family, params) = spec.split_once(':').unwrap_or((spec, ""));
        let f = self.factories.get(family.trim()).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown kernel family {family:?}; known: {}",
                self.factories.keys().copied().collect::<Vec<_>>().join(", ")
            ))
        })?;
        f.build(&KernelParams::parse(params)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn exact(x: &Value) -> BigRational {
        x.as_exact().unwrap().clone()
    }

    #[test]
    fn padic_beta_table() {
        let k = kernel_padic_beta(5, v("1"), v("2")).unwrap();
        assert_eq!(exact(&k.transition((0, 0), (0, 1))), (rat(1) - ratio(1, 25)) / (rat(1) - ratio(1, 125)));
        assert_eq!(exact(&k.transition((3, 0), (4, 0))), ratio(1, 25));
        assert_eq!(exact(&k.transition((3, 2), (3, 3))), rat(1));
        assert!(k.transition((3, 2), (4, 2)).abs_diff(&Value::zero()) == 0.0);
        check_stochastic(&k, 8).unwrap();
        let f = kernel_padic_beta(5, v("0.5"), v("1e0")).unwrap();
        check_stochastic(&f, 6).unwrap();
    }

    #[test]
    fn q_and_real_tables() {
        let k = kernel_q_beta(v("1/2"), v("1"), v("1")).unwrap();
        assert_eq!(exact(&k.transition((0, 0), (0, 1))), ratio(2, 3));
        check_stochastic(&k, 8).unwrap();
        let r = kernel_real_beta(v("2"), v("2")).unwrap();
        assert_eq!(exact(&r.transition((0, 0), (0, 1))), ratio(1, 2));
        assert_eq!(exact(&r.transition((1, 0), (2, 0))), ratio(4, 6));
        let b = kernel_basic(v("1/2"), v("1")).unwrap();
        assert_eq!(exact(&b.transition((0, 0), (0, 0))), ratio(1, 2));
        let b = kernel_basic(v("1/2"), v("60")).unwrap();
        assert!(b.transition((0, 0), (1, 0)).to_f64() > 1.0 - 1e-15);
        check_stochastic(&kernel_q_gamma(v("1/3"), v("2")).unwrap(), 8).unwrap();
        check_stochastic(&kernel_q_beta(v("0.3"), v("0.7"), v("1.3")).unwrap(), 8).unwrap();
    }

    #[test]
    fn u_gamma_table_and_shadow() {
        let u = crt_u(&[2, 3, 5], 4).unwrap();
        for p in [2u64, 3, 5] {
            assert_eq!(&u % BigInt::from(p.pow(4)), BigInt::from(p));
            let sh = u_gamma_shadow(&u, 2, p, 4).unwrap();
            assert_eq!(sh.valuation, -2);
            assert!(sh.agreement >= 3);
        }
        let k = kernel_u_gamma(u, 2).unwrap();
        assert_eq!(exact(&k.transition((3, 1), (4, 2))), rat(1));
        check_stochastic(&k, 6).unwrap();
    }

    #[test]
    fn propagation_matches_closed_form() {
        let k = kernel_real_beta(v("2"), v("2")).unwrap();
        let one = propagate(&k, 1);
        assert_eq!(one.by_j().values().map(exact).collect::<Vec<_>>(), vec![ratio(1, 2), ratio(1, 2)]);
        let two = propagate(&k, 2);
        assert!(two.by_j().values().all(|w| exact(w) == ratio(1, 3)));
        for (a, b) in [(2, 2), (1, 3), (5, 2)] {
            let k = kernel_real_beta(Value::int(a), Value::int(b)).unwrap();
            for n in 0..=10 {
                let closed = real_beta_layer_closed_form(&rat(a), &rat(b), n).unwrap();
                assert_eq!(propagate(&k, n), closed);
            }
        }
        let c = real_beta_layer_closed_form(&rat(2), &rat(4), 1).unwrap();
        assert_eq!(exact(&c.weights[&(1, 0)]), ratio(1, 3));
    }

    #[test]
    fn heisenberg_relation() {
        let (a, b) = (rat(2), rat(2));
        assert!(heisenberg_residual(&a, &b, 1, &[rat(1)]).unwrap().iter().all(Zero::is_zero));
        let (a, b) = (rat(1), rat(3));
        for e in 0..2 {
            let mut phi = vec![rat(0); 2];
            phi[e] = rat(1);
            assert!(heisenberg_residual(&a, &b, 2, &phi).unwrap().iter().all(Zero::is_zero));
        }
        assert!(d_op(&a, &b, 4, &vec![rat(1); 5]).iter().all(Zero::is_zero));
    }

    #[test]
    fn hahn_orthogonal_and_matches_gram_schmidt() {
        let (a, b) = (rat(2), rat(2));
        let tau = real_beta_layer_closed_form(&a, &b, 2).unwrap();
        let basis = hahn_basis(&a, &b, 2);
        assert!(basis[0].iter().all(|x| x == &basis[0][0]));
        assert!(tau_inner(&tau, &basis[0], &basis[1]).is_zero());
        let (a, b) = (rat(1), ratio(5, 2));
        for n in 1..=5 {
            let tau = real_beta_layer_closed_form(&a, &b, n).unwrap();
            let basis = hahn_basis(&a, &b, n);
            let gs = gram_schmidt_monomials(&a, &b, n).unwrap();
            for m in 0..=n as usize {
                for l in 0..m {
                    assert!(tau_inner(&tau, &basis[m], &basis[l]).is_zero());
                }
                let k = (0..=n as usize).find(|&j| !gs[m][j].is_zero()).unwrap();
                let lambda = &basis[m][k] / &gs[m][k];
                assert!(basis[m].iter().zip(&gs[m]).all(|(x, y)| x == &(&lambda * y)));
            }
        }
    }

    #[test]
    fn padic_limit_converges() {
        let r = limit_check(LimitTarget::Padic { p: 5 }, 1.0, 1.0, &[4, 8, 16, 32], 6, 1e-6).unwrap();
        assert!(r.passed(), "{r:?}");
        let root = (1.0 - 0.2) / (1.0 - 0.04);
        assert!((r.rows[3].root_up - root).abs() < 1e-12);
    }

    #[test]
    fn real_limit_is_first_order() {
        let r = limit_check(LimitTarget::Real { q0: 0.5 }, 2.0, 2.0, &[4, 8, 16, 32], 6, 1e-6).unwrap();
        assert!(r.monotone);
        let ratio = r.rows[2].sup_error / r.rows[3].sup_error;
        assert!((1.8..2.2).contains(&ratio), "{r:?}");
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_integer(&v("0"), &v("1/3")).unwrap(), Value::zero());
        assert_eq!(exact(&q_integer(&v("2"), &v("1/3")).unwrap()), ratio(4, 3));
        assert!(q_integer(&v("2"), &v("1")).is_err());
        assert_eq!(q_integer_total(&v("5/2"), &v("1")), v("5/2"));
        assert!((q_zeta(1.0, 1e-9, 100).unwrap().value - 1.0).abs() < 2e-9);
        let mut last = f64::INFINITY;
        for n in [5u32, 10, 20, 40] {
            let z = q_zeta(1.0 / n as f64, 2f64.powi(-(n as i32)), 10_000).unwrap();
            let err = (z.value - 2.0).abs();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn registry_round_trips() {
        let reg = KernelRegistry::default();
        for spec in [
            "p-beta:p=5,alpha=1,beta=2",
            "p-gamma:p=3,beta=1",
            "q-beta:q=1/2,alpha=1,beta=1",
            "real-beta:alpha=2,beta=2",
            "q-gamma:q=1/3,beta=2",
            "basic:q=1/2,beta=1",
            "u-gamma:u=7,beta=2",
        ] {
            let k = reg.build(spec).unwrap();
            assert_eq!(k.spec(), spec);
            check_stochastic(k.as_ref(), 5).unwrap();
        }
        assert!(reg.build("nope:x=1").is_err());
        assert!(reg.build("q-beta:q=2,alpha=1,beta=1").is_err());
        assert!(reg.build("q-beta:q=1/2,alpha=1").is_err());
        assert!(reg.build("basic:q=1/2,beta=1,extra=3").is_err());
    }
}
