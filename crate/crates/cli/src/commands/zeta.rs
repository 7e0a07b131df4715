use clap::{Arg, ArgMatches};
use num_bigint::BigInt;
use padic_interp::zeta::{
    agree_to, double_branch_eval, double_value, excluded_sigma0, extended_kummer_check, kl_branch_at,
    kl_branch_eval, kl_value, kummer_check, pq_hurwitz, pq_hurwitz_polynomial_route, universal_power,
    DoubleBranch, KLBranch,
};
use padic_interp::{PadicNumber, PrimePair};

use crate::registry::{def, flag, get, get_opt, has, list, on, opt, padic_arg, usage, CliResult, Command};
use crate::report::Report;

pub struct KlBranch;

impl Command for KlBranch {
    fn name(&self) -> &'static str {
        "kl-branch"
    }

    fn about(&self) -> &'static str {
        "Kubota-Leopoldt branch values with a representative-independence check"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "Prime"),
            def("s0", "2", "Branch index in 0..=p-2"),
            def("prec", "4", "Precision N"),
            opt("t", "Natural representatives t (comma list)"),
            opt("s", "A p-adic integer s: rational, digit expansion or (v, u, r)_p"),
            opt("check", "Also evaluate at t + K p^N for K = 1..=check and compare"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let big_n: u32 = get(m, "prec")?;
        let branch = KLBranch::new(p, get(m, "s0")?, big_n)?;
        let values = match (has(m, "t"), has(m, "s")) {
            (true, false) => list::<u64>(m, "t")?
                .into_iter()
                .map(|t| kl_branch_at(&branch, t))
                .collect::<Result<Vec<_>, _>>()?,
            (false, true) => vec![kl_branch_eval(&branch, &padic_arg(m, "s", p, big_n)?)?],
            _ => return usage("give exactly one of --t or --s"),
        };
        let checks: u64 = get_opt(m, "check")?.unwrap_or(0);
        let pn = p.pow(big_n);
        let mut r = Report::new(self.name(), &["s0", "t", "n", "value_as_rational", "value_mod_p^N"]);
        for v in values {
            // Kummer gives one digit beyond N off the pole branch
            let want = match v.value.absolute_precision() {
                Some(a) if branch.s0() == 0 => a,
                _ => big_n as i64 + 1,
            };
            for k in 1..=checks {
                let other = kl_branch_at(&branch, v.t + k * pn)?;
                if !agree_to(&v.exact, &other.exact, p, want) {
                    r.fail(format!("t={} and t={} disagree mod {p}^{want}", v.t, other.t));
                }
            }
            r.row([
                branch.s0().to_string(),
                v.t.to_string(),
                v.n.to_string(),
                v.exact.to_string(),
                v.value.to_string(),
            ]);
        }
        Ok(r)
    }
}

pub struct DoubleBranchCmd;

impl Command for DoubleBranchCmd {
    fn name(&self) -> &'static str {
        "double-branch"
    }

    fn about(&self) -> &'static str {
        "Two-prime zeta branches, raw double values and the excluded sigma0 set"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "First prime (>= 5 for branches)"),
            def("q", "7", "Second prime"),
            opt("sigma0", "Regular branch index"),
            flag("pole", "Use the sigma0 = -1 pole branch"),
            def("sigma", "0,1,2", "Branch arguments (comma list)"),
            def("prec", "4", "Precision N in both primes"),
            opt("check", "Also compare with sigma + K p^N in Z_p and sigma + K q^N in Z_q, K = 1..=check"),
            flag("excluded", "List the excluded sigma0 values"),
            opt("value", "Print the raw double value at n (comma list)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let pair = PrimePair::new(get(m, "p")?, get(m, "q")?)?;
        if on(m, "excluded") {
            let mut r = Report::new(self.name(), &["sigma0"]);
            for s in excluded_sigma0(pair) {
                r.row([s]);
            }
            return Ok(r);
        }
        if has(m, "value") {
            let mut r = Report::new(self.name(), &["n", "value"]);
            for n in list::<u64>(m, "value")? {
                r.row([n.to_string(), double_value(pair, n)?.to_string()]);
            }
            return Ok(r);
        }
        let branch = match (get_opt::<i64>(m, "sigma0")?, on(m, "pole")) {
            (Some(s0), false) => DoubleBranch::new(pair, s0)?,
            (None, true) => DoubleBranch::pole_branch(pair)?,
            _ => return usage("give exactly one of --sigma0 or --pole"),
        };
        let big_n: u32 = get(m, "prec")?;
        let checks: u64 = get_opt(m, "check")?.unwrap_or(0);
        let (p, q) = (pair.p(), pair.q());
        let mut r = Report::new(self.name(), &["sigma0", "sigma", "k", "value_as_rational", "mod_p^N", "mod_q^N"]);
        for sigma in list::<u64>(m, "sigma")? {
            let v = double_branch_eval(&branch, sigma, big_n)?;
            for k in 1..=checks {
                for prime in [p, q] {
                    let other = sigma + k * prime.pow(big_n);
                    let w = double_branch_eval(&branch, other, big_n)?;
                    if !agree_to(&v.exact, &w.exact, prime, big_n as i64 + 1) {
                        r.fail(format!("sigma={sigma} and sigma={other} disagree mod {prime}^{}", big_n + 1));
                    }
                }
            }
            r.row([
                branch.sigma0().to_string(),
                sigma.to_string(),
                v.k.to_string(),
                v.exact.to_string(),
                v.p_value.to_string(),
                v.q_value.to_string(),
            ]);
        }
        Ok(r)
    }
}

pub struct Kummer;

impl Command for Kummer {
    fn name(&self) -> &'static str {
        "kummer"
    }

    fn about(&self) -> &'static str {
        "Kummer congruences, single-prime or for a pair of primes"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "Prime"),
            opt("q", "Second prime for the extended check"),
            opt("i", "Index i"),
            opt("j", "Index j"),
            def("n", "0", "Congruence level n"),
            opt("sweep", "Check every valid pair i, j <= sweep"),
            flag("values", "Print zeta_p(1-i) and zeta_p(1-j)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let n: u32 = get(m, "n")?;
        let q: Option<u64> = get_opt(m, "q")?;
        let pair = q.map(|q| PrimePair::new(p, q)).transpose()?;
        let pairs: Vec<(u64, u64)> = match get_opt::<u64>(m, "sweep")? {
            Some(bound) => {
                let mut period = (p - 1) * p.pow(n);
                if let Some(q) = q {
                    period = num_integer::lcm(period, (q - 1) * q.pow(n));
                }
                let mut out = Vec::new();
                for i in 2..=bound {
                    if i % (p - 1) == 0 || q.is_some_and(|q| i % (q - 1) == 0) {
                        continue;
                    }
                    let mut j = i + period;
                    while j <= bound {
                        out.push((i, j));
                        j += period;
                    }
                }
                out
            }
            None => vec![(get(m, "i")?, get(m, "j")?)],
        };
        let values = on(m, "values");
        let mut cols = vec!["i", "j", "n", "prime", "valuation", "required", "status"];
        if values {
            cols.extend(["value_i", "value_j"]);
        }
        let mut r = Report::new(self.name(), &cols);
        for (i, j) in pairs {
            let sides = match pair {
                Some(pair) => {
                    let e = extended_kummer_check(pair, i, j, n)?;
                    vec![e.p_side, e.q_side]
                }
                None => vec![kummer_check(p, i, j, n)?],
            };
            for k in sides {
                let ok = k.passed();
                if !ok {
                    r.fail(format!("p={} i={i} j={j}: valuation {:?} < {}", k.p, k.valuation, n + 1));
                }
                let mut row = vec![
                    i.to_string(),
                    j.to_string(),
                    n.to_string(),
                    k.p.to_string(),
                    k.valuation.map_or("inf".into(), |v| v.to_string()),
                    (n + 1).to_string(),
                    if ok { "pass" } else { "FAIL" }.to_string(),
                ];
                if values {
                    row.push(kl_value(k.p, i)?.to_string());
                    row.push(kl_value(k.p, j)?.to_string());
                }
                r.row(row);
            }
        }
        Ok(r)
    }
}

pub struct UniversalPowerCmd;

impl Command for UniversalPowerCmd {
    fn name(&self) -> &'static str {
        "universal-power"
    }

    fn about(&self) -> &'static str {
        "n^s in each Z_p by the binomial series, against modular exponentiation"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("n", "211", "Base, congruent to 1 mod the product of the primes"),
            def("s", "5", "Exponents (comma list)"),
            def("primes", "2,3,5,7", "Prime set S"),
            def("prec", "4", "Precision N"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let n: BigInt = get(m, "n")?;
        let primes: Vec<u64> = list(m, "primes")?;
        let big_n: u32 = get(m, "prec")?;
        let mut r = Report::new(self.name(), &["s", "p", "series", "direct", "terms", "status"]);
        for s in list::<i64>(m, "s")? {
            for (p, u) in universal_power(&n, s, &primes, big_n)? {
                let ok = u.agrees();
                if !ok {
                    r.fail(format!("s={s} p={p}: series {} vs direct {}", u.series, u.direct));
                }
                r.row([
                    s.to_string(),
                    p.to_string(),
                    u.series.to_string(),
                    u.direct.to_string(),
                    u.terms.to_string(),
                    if ok { "agree" } else { "DIFFER" }.to_string(),
                ]);
            }
        }
        Ok(r)
    }
}

pub struct PqHurwitzCmd;

impl Command for PqHurwitzCmd {
    fn name(&self) -> &'static str {
        "pq-hurwitz"
    }

    fn about(&self) -> &'static str {
        "p-q Hurwitz zeta values at n <= 0 in Z_p and Z_q"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("n", "0", "Argument n <= 0 (comma list)"),
            def("b", "1", "Residue b, prime to pq"),
            def("f", "35", "Modulus F, divisible by pq"),
            def("p", "5", "First prime"),
            def("q", "7", "Second prime"),
            def("prec", "6", "Precision N in both primes"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let pair = PrimePair::new(get(m, "p")?, get(m, "q")?)?;
        let b: u64 = get(m, "b")?;
        let f: u64 = get(m, "f")?;
        let big_n: u32 = get(m, "prec")?;
        let mut r = Report::new(
            self.name(),
            &["n", "inner_sum", "inner_integral", "rational_part", "p_value", "q_value", "polynomial_route"],
        );
        for n in list::<i64>(m, "n")? {
            let h = pq_hurwitz(n, b, f, pair, big_n)?;
            let (pp, pq) = pq_hurwitz_polynomial_route(n, b, f, pair, big_n)?;
            let same = |a: &PadicNumber, b: &PadicNumber| -> CliResult<bool> {
                let prec = a.absolute_precision().unwrap_or(big_n as i64).min(b.absolute_precision().unwrap_or(big_n as i64));
                Ok(a.congruent(b, prec)?)
            };
            let agree = same(&h.p_value, &pp)? && same(&h.q_value, &pq)?;
            if !agree {
                r.fail(format!("n={n}: the Bernoulli-sum and polynomial routes differ"));
            }
            if !h.inner_integral {
                r.fail(format!("n={n}: inner sum {} is not integral at p and q", h.inner_sum));
            }
            r.row([
                n.to_string(),
                h.inner_sum.to_string(),
                h.inner_integral.to_string(),
                h.rational_part.to_string(),
                h.p_value.to_string(),
                h.q_value.to_string(),
                if agree { "agree" } else { "DIFFER" }.to_string(),
            ]);
        }
        Ok(r)
    }
}
