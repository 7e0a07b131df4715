//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails when a criterion outside `EXPECTED_RED` fails, or when one
//! inside it passes.

use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use padic_interp::analytic::{completed_zeta, completed_zeta_dirichlet, euler_product_check, functional_equation_row, theta_transform_residual};
use padic_interp::chains::{
    check_stochastic, heisenberg_residual, kernel_real_beta, limit_check, propagate, q_zeta, KernelRegistry, LimitTarget, Value,
};
use padic_interp::gamma::{
    gamma_continuity_check, inverse_general, inverse_of_half_pr_plus_one, morita_gamma_exact, verify_triviality_theorem, Side,
};
use padic_interp::mahler::{forward_binomial, mahler_coefficients, mahler_coefficients_exact, verify_decay, IntegerSequenceFn, MahlerSeries};
use padic_interp::measures::{measure_on_open_set, psi_r_series};
use padic_interp::rational::{bernoulli_range, int_rat, rat, ratio, valuation};
use padic_interp::zeta::{
    double_branch_eval, excluded_sigma0, extended_kummer_check, kl_branch_at, kl_branch_eval, kummer_check, universal_power,
    DoubleBranch, KLBranch,
};
use padic_interp::{BigRational, PadicNumber, PrimePair};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria known not to hold as stated; see the README.
const EXPECTED_RED: &[u32] = &[2, 6, 10];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// Independent oracles.

/// Bernoulli numbers by the Akiyama-Tanigawa algorithm, with `B_1 = -1/2`.
fn bernoulli_oracle(max: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(max + 1);
    let mut out = Vec::with_capacity(max + 1);
    for m in 0..=max {
        a.push(ratio(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = rat(j as i64) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    if max >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn egcd_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

fn rising(x: &BigRational, k: u64) -> BigRational {
    (0..k).fold(rat(1), |acc, i| acc * (x + rat(i as i64)))
}

fn choose(n: u64, k: u64) -> BigRational {
    (0..k).fold(rat(1), |acc, i| acc * ratio((n - i) as i64, (i + 1) as i64))
}

fn at_least(x: &BigRational, p: u64, digits: i64) -> bool {
    valuation(x, p).is_none_or(|v| v >= digits)
}

// Criteria.

fn mahler_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let (l, prec) = (64u64, 8u32);
    let mut bad = Vec::new();
    for case in 0..25 {
        let p = [3u64, 5, 7][case % 3];
        let values: Vec<BigRational> = (0..=l).map(|_| rat(rng.gen_range(-1_000_000..=1_000_000))).collect();
        let f = IntegerSequenceFn::from_values(values.clone());
        let exact = mahler_coefficients_exact(&f, l).unwrap();
        if forward_binomial(&exact) != values {
            bad.push(format!("case {case}: exact forward sum differs"));
        }
        let series = mahler_coefficients(&f, l, p, prec).unwrap();
        let reparsed = MahlerSeries::from_text(&series.to_text()).unwrap();
        let m = BigUint::from(p).pow(prec);
        for x in 0..=l {
            let got = reparsed.evaluate_at_natural(x).unwrap().residue(prec).unwrap();
            let want = padic_interp::modular::rational_mod(&values[x as usize], &m).unwrap();
            if got != want {
                bad.push(format!("case {case}: p-adic sum differs at x={x}"));
                break;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad.is_empty() && secs < 5.0, format!("25 functions, {secs:.2}s{}", failures(&bad)))
}

fn mahler_decay() -> Outcome {
    let s = 3u32;
    let mut literal = Vec::new();
    let mut in_hypothesis = Vec::new();
    let mut cases = 0;
    for p in [3u64, 5] {
        for t in 1..=2u32 {
            let l = 3 * p.pow(t) * s as u64;
            let mut fs: Vec<(String, IntegerSequenceFn)> =
                vec![(format!("gamma_{p}"), IntegerSequenceFn::new(l, move |x| int_rat(morita_gamma_exact(x, p).unwrap())))];
            for n in 1..=t {
                let pn = p.pow(n);
                for b in 0..pn {
                    fs.push((format!("char({b},{n})"), IntegerSequenceFn::new(l, move |x| rat((x % pn == b) as i64))));
                }
            }
            for (name, f) in fs {
                cases += 1;
                let r = verify_decay(&f, p, s, t, l).unwrap();
                if let Some(v) = r.violation {
                    let msg = format!("{name} p={p} t={t}: sigma={} n={} v={}", v.sigma, v.index, v.valuation);
                    if r.hypothesis_holds {
                        in_hypothesis.push(msg.clone());
                    }
                    literal.push(msg);
                }
            }
        }
    }
    outcome(
        literal.is_empty(),
        format!(
            "{cases} sequences, {} violations ({} where the modulus hypothesis holds){}",
            literal.len(),
            in_hypothesis.len(),
            failures(&literal)
        ),
    )
}

fn morita_gamma() -> Outcome {
    let mut bad = Vec::new();
    for p in [3u64, 5, 7] {
        let g: Vec<BigInt> = (0..=501).map(|n| morita_gamma_exact(n, p).unwrap()).collect();
        if !g[0].is_one() {
            bad.push(format!("p={p}: Gamma(0) = {}", g[0]));
        }
        for n in 0..=500u64 {
            let step = if n % p == 0 { BigInt::from(-1) } else { -BigInt::from(n) };
            if g[n as usize + 1] != step * &g[n as usize] {
                bad.push(format!("p={p}: functional equation at n={n}"));
            }
        }
        if !((&g[p as usize] - BigInt::one()) % BigInt::from(p)).is_zero() {
            bad.push(format!("p={p}: Gamma(p) = {} is not 1 mod p", g[p as usize]));
        }
        for s in 1..=3u32 {
            let r = gamma_continuity_check(p, s, 200, true).unwrap();
            if !r.product_failures.is_empty() || !r.gamma_failures.is_empty() {
                bad.push(format!("p={p} s={s}: continuity fails at {:?}", r.product_failures));
            }
            // Wilson: the product of the units below p^s is -1 mod p^s.
            let ps = p.pow(s);
            let w = (1..ps).filter(|k| k % p != 0).fold(1u128, |acc, k| acc * k as u128 % ps as u128);
            if w != ps as u128 - 1 {
                bad.push(format!("p={p} s={s}: Wilson product {w}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("n <= 500, s <= 3{}", failures(&bad)))
}

fn kummer_suites() -> Outcome {
    let oracle = bernoulli_oracle(400);
    if oracle != bernoulli_range(400) {
        return outcome(false, "Bernoulli table disagrees with the Akiyama-Tanigawa oracle");
    }
    let mut bad = Vec::new();
    let mut single = 0;
    for p in [5u64, 7, 11] {
        for n in 0..=2u32 {
            let modulus = p.pow(n) * (p - 1);
            for i in 2..=400u64 {
                if i % (p - 1) == 0 {
                    continue;
                }
                for j in ((i + modulus)..=400).step_by(modulus as usize) {
                    single += 1;
                    let r = kummer_check(p, i, j, n).unwrap();
                    if !r.passed() {
                        bad.push(format!("p={p} i={i} j={j} n={n}: v={:?}", r.valuation));
                    }
                }
            }
        }
    }
    let mut extended = 0;
    for (p, q) in [(5u64, 7u64), (5, 11), (7, 11)] {
        let pair = PrimePair::new(p, q).unwrap();
        for n in 0..=2u32 {
            let modulus = num_integer::lcm(p.pow(n) * (p - 1), q.pow(n) * (q - 1));
            for i in 2..=400u64 {
                if i % (p - 1) == 0 || i % (q - 1) == 0 {
                    continue;
                }
                for j in ((i + modulus)..=400).step_by(modulus as usize) {
                    extended += 1;
                    let r = extended_kummer_check(pair, i, j, n).unwrap();
                    if !r.passed() {
                        bad.push(format!("({p},{q}) i={i} j={j} n={n}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{single} single-prime and {extended} two-prime pairs{}", failures(&bad)))
}

fn measure_moments() -> Outcome {
    let start = Instant::now();
    let b = bernoulli_oracle(26);
    let zeta_neg = |m: u64| {
        if m == 0 {
            ratio(-1, 2)
        } else {
            -&b[m as usize + 1] / rat(m as i64 + 1)
        }
    };
    let mut bad = Vec::new();
    for a in [2u64, 3] {
        for r in [1u64, 2, 3, 5] {
            let series = psi_r_series(a, r, 24).unwrap();
            for m in 0..=24u64 {
                let want = (rat(1) - int_rat(BigInt::from(a).pow(m as u32 + 1))) * int_rat(BigInt::from(r).pow(m as u32)) * zeta_neg(m);
                if series.slot(m as usize) != want {
                    bad.push(format!("a={a} r={r} m={m}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(bad.is_empty() && secs < 10.0, format!("200 moments exact, {secs:.2}s{}", failures(&bad)))
}

fn open_set_measure() -> Outcome {
    let prec = 4u64;
    let mut conjectured = Vec::new();
    let mut hurwitz = Vec::new();
    let mut additivity = Vec::new();
    let mut count = 0;
    for a in [2u64, 3] {
        for p in [5u64, 7] {
            let measure = |n: u32, b: u64| measure_on_open_set(a, p, n, b, prec * p.pow(n) - 1).unwrap();
            let mut levels = Vec::new();
            for n in 0..=2u32 {
                let level: Vec<_> = (0..p.pow(n)).map(|b| measure(n, b)).collect();
                for m in &level {
                    count += 1;
                    if !m.matches_closed_form().unwrap() {
                        conjectured.push(format!("a={a} p={p} n={n} b={}", m.b));
                    }
                    if !m.matches_hurwitz_form().unwrap() {
                        hurwitz.push(format!("a={a} p={p} n={n} b={}", m.b));
                    }
                }
                levels.push(level);
            }
            for n in 0..2usize {
                let pn = p.pow(n as u32);
                for b in 0..pn {
                    let parent = &levels[n][b as usize].value;
                    let mut sum = PadicNumber::exact_zero(p);
                    for c in 0..p {
                        sum = sum.add(&levels[n + 1][(b + c * pn) as usize].value).unwrap();
                    }
                    if !sum.congruent(parent, prec as i64).unwrap() {
                        additivity.push(format!("a={a} p={p} n={n} b={b}"));
                    }
                }
            }
        }
    }
    let pass = conjectured.is_empty() && additivity.is_empty();
    outcome(
        pass,
        format!(
            "{count} sets: conjectured form misses {}, Hurwitz form misses {}, additivity misses {}{}",
            conjectured.len(),
            hurwitz.len(),
            additivity.len(),
            failures(&conjectured)
        ),
    )
}

fn spq_triviality() -> Outcome {
    let mut bad = Vec::new();
    let mut excluded = 0;
    for (p, q) in [(3u64, 5u64), (3, 7), (5, 7)] {
        let report = verify_triviality_theorem(p, q, 100, 16).unwrap();
        for row in &report.rows {
            let Some(w) = row.membership.witness() else {
                bad.push(format!("({p},{q}) j={}: undecided at depth 16", row.j));
                continue;
            };
            let (prime, other) = match w.side {
                Side::P => (p, q),
                Side::Q => (q, p),
            };
            let m = (prime as i128).pow(w.exponent);
            let ok = w.exponent <= 16
                && w.divisor == other
                && w.inverse % other == 0
                && egcd_inverse(w.parent as i128, m) == Some(w.inverse as i128);
            if ok {
                excluded += 1;
            } else {
                bad.push(format!("({p},{q}) j={}: witness does not check", row.j));
            }
        }
    }
    let mut grid = 0;
    for p in [3u64, 5, 7, 11, 13] {
        for r in 1..=5u32 {
            for s in r + 1..=r + 10 {
                grid += 1;
                let m = (p as i128).pow(s);
                let want = egcd_inverse(((p as i128).pow(r) + 1) / 2, m).unwrap();
                let got = inverse_of_half_pr_plus_one(p, r, s).unwrap().x;
                if got != BigUint::from(want as u128) {
                    bad.push(format!("half inverse p={p} r={r} s={s}"));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(7);
    while grid < 500 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let r = rng.gen_range(1..=4u32);
        let s = r + rng.gen_range(1..=8u32);
        let m = rng.gen_range(1..=50u64);
        let t: i64 = rng.gen_range(-50..=50);
        if t.rem_euclid(p as i64) == 0 {
            continue;
        }
        let num = m as i128 * (p as i128).pow(r) + t as i128;
        let divisors: Vec<u64> = (1..=num.unsigned_abs().min(1000) as u64).filter(|d| num % *d as i128 == 0).collect();
        let v = divisors[rng.gen_range(0..divisors.len())];
        grid += 1;
        let modulus = (p as i128).pow(s);
        let want = egcd_inverse(num / v as i128, modulus).unwrap();
        let got = inverse_general(m, r, t, v, p, s).unwrap();
        if got != BigUint::from(want as u128) {
            bad.push(format!("general inverse m={m} r={r} t={t} v={v} p={p} s={s}"));
        }
    }
    outcome(bad.is_empty(), format!("{excluded} witnesses checked, {grid} inverse cases{}", failures(&bad)))
}

fn branch_well_definedness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut bad = Vec::new();
    for case in 0..50 {
        let (p, big_n) = [(5u64, 1u32), (5, 2), (7, 1)][case % 3];
        let s0 = if p == 5 { 2 } else { [2u64, 4][rng.gen_range(0..2)] };
        let branch = KLBranch::new(p, s0, big_n).unwrap();
        let pn = p.pow(big_n);
        let t = rng.gen_range(0..pn);
        let t2 = t + rng.gen_range(1..=3u64) * pn;
        let (x, y) = (kl_branch_at(&branch, t).unwrap(), kl_branch_at(&branch, t2).unwrap());
        let via_eval = kl_branch_eval(&branch, &PadicNumber::from_int(t2 as i64, p, big_n + 2).unwrap()).unwrap();
        if !at_least(&(&x.exact - &y.exact), p, big_n as i64 + 1) || via_eval.exact != x.exact {
            bad.push(format!("KL p={p} s0={s0} N={big_n} t={t} t'={t2}"));
        }
    }
    let pair = PrimePair::new(5, 7).unwrap();
    let excluded = excluded_sigma0(pair);
    let regular: Vec<i64> = (0..=22).filter(|s| !excluded.contains(s)).collect();
    for case in 0..50 {
        let sigma0 = regular[rng.gen_range(0..regular.len())];
        let branch = DoubleBranch::new(pair, sigma0).unwrap();
        let big_n = 1u32;
        let prime = if case % 2 == 0 { pair.p() } else { pair.q() };
        let period = prime.pow(big_n);
        let sigma = rng.gen_range(0..period);
        let sigma2 = sigma + rng.gen_range(1..=2u64) * period;
        let x = double_branch_eval(&branch, sigma, big_n + 1).unwrap();
        let y = double_branch_eval(&branch, sigma2, big_n + 1).unwrap();
        let (vx, vy) = if prime == pair.p() { (&x.p_value, &y.p_value) } else { (&x.q_value, &y.q_value) };
        if !vx.congruent(vy, big_n as i64 + 1).unwrap() || !at_least(&(&x.exact - &y.exact), prime, big_n as i64 + 1) {
            bad.push(format!("double sigma0={sigma0} prime={prime} sigma={sigma} sigma'={sigma2}"));
        }
    }
    outcome(bad.is_empty(), format!("100 representative pairs{}", failures(&bad)))
}

fn universal_power_check() -> Outcome {
    let primes = [2u64, 3, 5, 7];
    let n = BigInt::from(211);
    let mut bad = Vec::new();
    for s in 0..=50i64 {
        for (p, u) in universal_power(&n, s, &primes, 4).unwrap() {
            let m = BigInt::from(p).pow(4);
            let want = n.modpow(&BigInt::from(s), &m);
            if !u.agrees() || BigInt::from(u.series.residue(4).unwrap()) != want {
                bad.push(format!("s={s} p={p}"));
            }
        }
    }
    let mut grid = 0;
    for p in primes {
        for m in 0..=3u32 {
            for k in 0..=20i64 {
                grid += 1;
                let shifted = k + p.pow(m) as i64;
                let a = &universal_power(&n, shifted, &[p], m + 1).unwrap()[&p];
                let b = &universal_power(&n, k, &[p], m + 1).unwrap()[&p];
                if a.series.residue(m + 1).unwrap() != b.series.residue(m + 1).unwrap() {
                    bad.push(format!("continuity p={p} m={m} k={k}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("51 exponents x 4 primes, {grid} continuity cases{}", failures(&bad)))
}

fn chains() -> Outcome {
    let mut bad = Vec::new();
    let registry = KernelRegistry::default();
    let specs = [
        "p-beta:p=5,alpha=1,beta=2",
        "p-gamma:p=3,beta=1",
        "q-beta:q=1/2,alpha=1,beta=1",
        "real-beta:alpha=2,beta=3",
        "q-gamma:q=1/3,beta=2",
        "basic:q=1/2,beta=1",
        "u-gamma:u=7,beta=2",
    ];
    for spec in specs {
        if let Err(e) = check_stochastic(registry.build(spec).unwrap().as_ref(), 12) {
            bad.push(format!("{spec}: {e}"));
        }
    }
    let pairs = [(1, 1, 1, 1), (2, 1, 3, 1), (1, 2, 5, 2), (3, 1, 1, 1), (7, 3, 2, 5), (4, 1, 4, 1)];
    for (an, ad, bn, bd) in pairs {
        let (alpha, beta) = (ratio(an, ad), ratio(bn, bd));
        let kernel = kernel_real_beta(Value::Exact(alpha.clone()), Value::Exact(beta.clone())).unwrap();
        let (ha, hb) = (&alpha / rat(2), &beta / rat(2));
        for n in 0..=20u64 {
            let layer = propagate(&kernel, n);
            let norm = rising(&(&ha + &hb), n);
            for i in 0..=n {
                let j = n - i;
                let want = choose(n, i) * rising(&ha, i) * rising(&hb, j) / &norm;
                let got = layer.weights.get(&(i, j)).and_then(|w| w.as_exact().cloned()).unwrap_or_else(BigRational::zero);
                if got != want {
                    bad.push(format!("real-beta ({alpha},{beta}) at ({i},{j})"));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(10);
    for (an, ad, bn, bd) in [(1, 1, 1, 1), (1, 2, 3, 2), (3, 1, 2, 1), (5, 3, 7, 4)] {
        let (alpha, beta) = (ratio(an, ad), ratio(bn, bd));
        for n in 1..=6u64 {
            let mut trials: Vec<Vec<BigRational>> = (0..n).map(|k| (0..n).map(|j| rat((j == k) as i64)).collect()).collect();
            trials.push((0..n).map(|_| rat(rng.gen_range(-9..=9))).collect());
            for phi in trials {
                if heisenberg_residual(&alpha, &beta, n, &phi).unwrap().iter().any(|x| !x.is_zero()) {
                    bad.push(format!("Heisenberg ({alpha},{beta}) n={n}"));
                }
            }
        }
    }
    let schedule = [4, 8, 16, 32];
    let padic = limit_check(LimitTarget::Padic { p: 5 }, 1.0, 1.0, &schedule, 12, 1e-6).unwrap();
    let real = limit_check(LimitTarget::Real { q0: 0.5 }, 1.0, 1.0, &schedule, 12, 1e-6).unwrap();
    for (name, r) in [("p-adic", &padic), ("real", &real)] {
        if !r.passed() {
            bad.push(format!("{name} limit error {:.3e} at N=32", r.final_error()));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "7 kernels, 6 real-beta pairs, 4 Heisenberg pairs; limit errors p-adic {:.2e}, real {:.2e}{}",
            padic.final_error(),
            real.final_error(),
            failures(&bad)
        ),
    )
}

fn q_zeta_limit() -> Outcome {
    let n = 40.0f64;
    let mut worst = 0f64;
    for s in [1.0f64, 2.0, 3.0] {
        let z = q_zeta(s / n, 2f64.powf(-n), 100_000).unwrap();
        worst = worst.max((z.value - 1.0 / (1.0 - 2f64.powf(-s))).abs());
    }
    outcome(worst < 1e-4, format!("worst error {worst:.2e} at N=40"))
}

fn analytic_shadows() -> Outcome {
    let mut bad = Vec::new();
    let mut theta_worst = 0f64;
    for k in 0..=32 {
        let x = (0.125f64.ln() + k as f64 * (64f64.ln() / 32.0)).exp();
        theta_worst = theta_worst.max(theta_transform_residual(x).unwrap().abs());
    }
    if !(theta_worst < 1e-12) {
        bad.push(format!("theta residual {theta_worst:.2e}"));
    }
    let mut fe_worst = 0f64;
    for s in [0.25, 0.4, 0.75, 2.0, 3.0] {
        fe_worst = fe_worst.max(functional_equation_row(s, 200).unwrap().residual.abs());
    }
    // The integral route is symmetric in s and 1-s, so also cross it with the Dirichlet series.
    for s in [2.0, 3.0] {
        let dirichlet = completed_zeta_dirichlet(s).unwrap();
        fe_worst = fe_worst.max((completed_zeta(1.0 - s, 200).unwrap() - dirichlet).abs());
        fe_worst = fe_worst.max((completed_zeta(s, 200).unwrap() - dirichlet).abs());
    }
    if !(fe_worst < 1e-10) {
        bad.push(format!("functional equation residual {fe_worst:.2e}"));
    }
    let lambda2 = (completed_zeta(2.0, 200).unwrap() - PI / 6.0).abs();
    if !(lambda2 < 1e-10) {
        bad.push(format!("Lambda(2) off by {lambda2:.2e}"));
    }
    for s in [2.0, 3.0, 4.0] {
        let e = euler_product_check(s, 10_000, 1_000_000).unwrap();
        if !e.within_bound() {
            bad.push(format!("Euler s={s}: residual {:.2e} above bound {:.2e}", e.residual, e.bound));
        }
    }
    outcome(
        bad.is_empty(),
        format!("theta {theta_worst:.1e}, functional equation {fe_worst:.1e}, Lambda(2) {lambda2:.1e}{}", failures(&bad)),
    )
}

fn failures(list: &[String]) -> String {
    match list {
        [] => String::new(),
        [first, ..] => format!("; first failure: {first}"),
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Mahler round trip", mahler_round_trip),
        (2, "Mahler coefficient decay", mahler_decay),
        (3, "Morita gamma", morita_gamma),
        (4, "Kummer congruences", kummer_suites),
        (5, "measure moments", measure_moments),
        (6, "open-set measure closed form", open_set_measure),
        (7, "S(p,q) triviality and inverse formulas", spq_triviality),
        (8, "branch well-definedness", branch_well_definedness),
        (9, "universal power", universal_power_check),
        (10, "chains", chains),
        (11, "q-zeta limit", q_zeta_limit),
        (12, "analytic shadows", analytic_shadows),
    ];
    let mut surprises = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let expected_red = EXPECTED_RED.contains(&id);
        let tag = match (o.pass, expected_red) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if o.pass == expected_red {
            surprises.push(id);
        }
        println!("criterion {id:>2} {tag}: {name}: {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
    }
    if !surprises.is_empty() {
        println!("acceptance outcome differs from the expected list at {surprises:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} pass, {} known failures", 12 - EXPECTED_RED.len(), EXPECTED_RED.len());
}
