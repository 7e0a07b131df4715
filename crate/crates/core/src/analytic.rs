//! Floating-point checks of the theta transformation, the completed zeta
//! functional equation, the Euler product and finite-prime Weil sums.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{invalid, Error, Result};
use crate::modular::is_prime;
use crate::rational::bernoulli;

/// `ω(y) = Θ(iy) = 1 + 2 sum_{n>=1} exp(-π n^2 y)`, stopped once a term
/// drops below `1e-17`.
pub fn theta(y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return invalid(format!("theta needs y > 0, got {y}"));
    }
    let mut sum = 0.0;
    for n in 1u32.. {
        let t = (-PI * (n as f64).powi(2) * y).exp();
        if t < 1e-17 {
            break;
        }
        sum += t;
    }
    Ok(1.0 + 2.0 * sum)
}

/// `|ω(1/x) - sqrt(x) ω(x)|`.
pub fn theta_transform_residual(x: f64) -> Result<f64> {
    Ok((theta(1.0 / x)? - x.sqrt() * theta(x)?).abs())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Number of quadrature nodes used by [`completed_zeta`].
pub const DEFAULT_NODES: usize = 200;

/// `Λ(s) = -1/s - 1/(1-s) + (1/2) ∫_1^∞ (ω(y) - 1)(y^(s/2-1) + y^((1-s)/2-1)) dy`,
/// integrated after `y = 1 + u/(1-u)`.
pub fn completed_zeta(s: f64, nodes: usize) -> Result<f64> {
    if s == 0.0 || s == 1.0 {
        return Err(Error::Pole(format!("Λ has a pole at s = {s}")));
    }
    let mut integral = 0.0;
    for (x, w) in gauss_legendre(nodes) {
        let u = 0.5 * (x + 1.0);
        let y = 1.0 + u / (1.0 - u);
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        let psi = theta(y)? - 1.0;
        integral += 0.5 * w * psi * (y.powf(s / 2.0 - 1.0) + y.powf((1.0 - s) / 2.0 - 1.0)) * jac;
    }
    Ok(-1.0 / s - 1.0 / (1.0 - s) + 0.5 * integral)
}

/// `ζ(s)` for real `s > 1` from the Dirichlet series with an
/// Euler–Maclaurin tail.
pub fn zeta_dirichlet(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return invalid(format!("the Dirichlet series needs s > 1, got {s}"));
    }
    let n = 20u32;
    let nf = n as f64;
    let mut sum: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^(-s-2k+1)
    let mut rising = s;
    let mut fact = 2.0;
    for k in 1..=8usize {
        let b = bernoulli(2 * k).to_f64().unwrap_or(f64::NAN);
        sum += b / fact * rising * nf.powf(-s - 2.0 * k as f64 + 1.0);
        let kf = 2.0 * k as f64;
        rising *= (s + kf - 1.0) * (s + kf);
        fact *= (kf + 1.0) * (kf + 2.0);
    }
    Ok(sum)
}

/// `π^(-s/2) Γ(s/2) ζ(s)` with `ζ` from the Dirichlet series.
pub fn completed_zeta_dirichlet(s: f64) -> Result<f64> {
    Ok((-s / 2.0 * PI.ln() + ln_gamma(s / 2.0)).exp() * zeta_dirichlet(s)?)
}

/// `ζ(s) = Λ(s) π^(s/2) / Γ(s/2)` on the continuation.
pub fn zeta_from_completed(s: f64, nodes: usize) -> Result<f64> {
    Ok(completed_zeta(s, nodes)? * PI.powf(s / 2.0) / gamma(s / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalEquationRow {
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `Λ(s)` against `Λ(1 - s)`.
pub fn functional_equation_row(s: f64, nodes: usize) -> Result<FunctionalEquationRow> {
    let lhs = completed_zeta(s, nodes)?;
    let rhs = completed_zeta(1.0 - s, nodes)?;
    Ok(FunctionalEquationRow { s, lhs, rhs, residual: (lhs - rhs).abs() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerReport {
    pub s: f64,
    pub prime_bound: u64,
    pub term_bound: u64,
    pub product: f64,
    pub partial_sum: f64,
    pub residual: f64,
    /// `ζ(s)(exp(P^(1-s)/(s-1)) - 1) + M^(1-s)/(s-1)`.
    pub bound: f64,
}

impl EulerReport {
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// `|prod_{p<=P} (1-p^-s)^-1 - sum_{n<=M} n^-s|` with its tail bound.
pub fn euler_product_check(s: f64, prime_bound: u64, term_bound: u64) -> Result<EulerReport> {
    if !(s > 1.0) {
        return invalid(format!("the Euler product needs s > 1, got {s}"));
    }
    let log_product: f64 = primes_up_to(prime_bound).iter().map(|&p| -(-(p as f64).powf(-s)).ln_1p()).sum();
    let product = log_product.exp();
    // summed smallest first
    let partial_sum: f64 = (1..=term_bound).rev().map(|n| (n as f64).powf(-s)).sum();
    let zeta = zeta_dirichlet(s)?;
    let pb = prime_bound.max(1) as f64;
    let bound = zeta * (pb.powf(1.0 - s) / (s - 1.0)).exp_m1() + (term_bound.max(1) as f64).powf(1.0 - s) / (s - 1.0);
    Ok(EulerReport {
        s,
        prime_bound,
        term_bound,
        product,
        partial_sum,
        residual: (product - partial_sum).abs(),
        bound,
    })
}

/// `log p * sum_{0<|n|<=N} p^(-|n|/2) f(p^n)`.
pub fn weil_finite(f: &dyn Fn(f64) -> f64, p: u64, n_bound: u32) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pf = p as f64;
    let mut sum = 0.0;
    for n in (1..=n_bound as i32).rev() {
        let w = pf.powf(-(n as f64) / 2.0);
        sum += w * (f(pf.powi(n)) + f(pf.powi(-n)));
    }
    Ok(pf.ln() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        assert!((theta(50.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((theta(0.5).unwrap() - 2f64.sqrt() * theta(2.0).unwrap()).abs() < 1e-12);
        for k in -3..=3 {
            assert!(theta_transform_residual(2f64.powi(k)).unwrap() < 1e-12);
        }
        assert!(theta(0.0).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let q = gauss_legendre(10);
        let total: f64 = q.iter().map(|(x, w)| w * x.powi(18)).sum();
        assert!((total - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn completed_zeta_symmetry_and_value() {
        for s in [0.25, 0.4, 0.75, 2.0, 3.0] {
            assert!(functional_equation_row(s, DEFAULT_NODES).unwrap().residual < 1e-10);
        }
        assert!((completed_zeta(2.0, DEFAULT_NODES).unwrap() - PI / 6.0).abs() < 1e-10);
        for s in [2.0, 2.5, 3.0, 4.0] {
            let d = completed_zeta_dirichlet(s).unwrap();
            assert!((completed_zeta(s, DEFAULT_NODES).unwrap() - d).abs() < 1e-10);
        }
        assert!(matches!(completed_zeta(1.0, 10), Err(Error::Pole(_))));
        assert!(zeta_from_completed(-2.0 + 1e-6, DEFAULT_NODES).unwrap().abs() < 1e-6);
        assert!((zeta_from_completed(-1.0, DEFAULT_NODES).unwrap() + 1.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn euler_product_examples() {
        let r = euler_product_check(2.0, 10_000, 1_000_000).unwrap();
        assert!(r.residual < 1e-4 && r.within_bound());
        let r = euler_product_check(3.0, 10_000, 1_000_000).unwrap();
        assert!(r.residual < 1e-7 && r.within_bound());
        let r = euler_product_check(1.5, 10_000, 1_000_000).unwrap();
        assert!(r.within_bound());
        assert!(euler_product_check(2.0, 100, 1000).unwrap().residual > euler_product_check(2.0, 1000, 10_000).unwrap().residual);
    }

    #[test]
    fn weil_examples() {
        let ind = |x: f64| if (x - 5.0).abs() < 1e-9 { 1.0 } else { 0.0 };
        assert!((weil_finite(&ind, 5, 10).unwrap() - 5f64.ln() / 5f64.sqrt()).abs() < 1e-15);
        let g = |x: f64| (-(x.ln()).powi(2)).exp();
        let a = weil_finite(&g, 3, 20).unwrap();
        let b = weil_finite(&g, 3, 40).unwrap();
        assert!((a - b).abs() < 1e-14);
        let pos: f64 = (1..=20).map(|n| 3f64.powf(-(n as f64) / 2.0) * g(3f64.powi(n))).sum::<f64>() * 3f64.ln();
        assert!((a - 2.0 * pos).abs() < 1e-14);
    }
}
