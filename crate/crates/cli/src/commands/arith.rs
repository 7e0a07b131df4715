use clap::{Arg, ArgMatches};
use padic_interp::padic::{
    angle_bracket, crt_pair, double_teichmuller, ideal_shadow, padic_norm, padic_of_rational, teichmuller,
    teichmuller_total,
};
use padic_interp::rational::{
    bernoulli, bernoulli_polynomial, bernoulli_range, bernoulli_tangent, binomial, binomial_poly, rising_factorial,
    zeta_neg, zeta_one_minus,
};
use padic_interp::{PadicNumber, PrimePair};

use crate::registry::{def, flag, get, get_opt, has, on, opt, padic_arg, rational, raw, usage, CliResult, Command};
use crate::report::Report;

pub struct Bernoulli;

impl Command for Bernoulli {
    fn name(&self) -> &'static str {
        "bernoulli"
    }

    fn about(&self) -> &'static str {
        "Bernoulli numbers, polynomials, binomials and rising factorials"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            opt("k", "Index k"),
            opt("max", "Tabulate B_0..B_max and cross-check against the tangent-number route"),
            flag("poly", "Print the Bernoulli polynomial B_k(x) instead of B_k"),
            opt("binomial", "n,k for C(n,k)"),
            opt("binomial-poly", "x,k for C(x,k) with rational x"),
            opt("rising", "x,k for the rising factorial (x)_k"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        if has(m, "binomial") {
            let (n, k) = pair_of(raw(m, "binomial")?, "binomial")?;
            let mut r = Report::new(self.name(), &["value"]);
            r.row([binomial(parse(n, "binomial")?, parse(k, "binomial")?)]);
            return Ok(r);
        }
        if has(m, "binomial-poly") || has(m, "rising") {
            let key = if has(m, "rising") { "rising" } else { "binomial-poly" };
            let (x, k) = pair_of(raw(m, key)?, key)?;
            let x = parse(x, key)?;
            let k = parse(k, key)?;
            let v = if key == "rising" { rising_factorial(&x, k) } else { binomial_poly(&x, k) };
            let mut r = Report::new(self.name(), &["value"]);
            r.row([v]);
            return Ok(r);
        }
        if let Some(max) = get_opt::<usize>(m, "max")? {
            let reference = bernoulli_range(max);
            let tangent = bernoulli_tangent(max);
            let mut r = Report::new(self.name(), &["k", "b_k", "tangent_route"]);
            for (k, (b, t)) in reference.iter().zip(&tangent).enumerate() {
                let agrees = b == t;
                r.row([k.to_string(), b.to_string(), if agrees { "agree" } else { "DIFFER" }.to_string()]);
                if !agrees {
                    r.fail(format!("B_{k}: recurrence {b} vs tangent route {t}"));
                }
            }
            return Ok(r);
        }
        let k: usize = get(m, "k")?;
        let mut r = Report::new(self.name(), &["value"]);
        if on(m, "poly") {
            r.row([bernoulli_polynomial(k)]);
        } else {
            r.row([bernoulli(k)]);
        }
        Ok(r)
    }
}

pub struct ZetaNeg;

impl Command for ZetaNeg {
    fn name(&self) -> &'static str {
        "zeta-neg"
    }

    fn about(&self) -> &'static str {
        "zeta(-m) or zeta(1-k) as an exact rational"
    }

    fn args(&self) -> Vec<Arg> {
        vec![opt("m", "Evaluate zeta(-m)"), opt("one-minus", "Evaluate zeta(1-k) for k >= 2")]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let v = match (get_opt::<u64>(m, "m")?, get_opt::<u64>(m, "one-minus")?) {
            (Some(x), None) => zeta_neg(x),
            (None, Some(k)) => zeta_one_minus(k)?,
            _ => return usage("give exactly one of --m or --one-minus"),
        };
        let mut r = Report::new(self.name(), &["value"]);
        r.row([v]);
        Ok(r)
    }
}

pub struct Padic;

impl Command for Padic {
    fn name(&self) -> &'static str {
        "padic"
    }

    fn about(&self) -> &'static str {
        "p-adic arithmetic on rationals or (v, u, r)_p triples"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "Prime"),
            opt("x", "First operand: rational, digit expansion or (v, u, r)_p"),
            opt("y", "Second operand for binary operations"),
            def("prec", "8", "Relative precision for rational inputs"),
            def(
                "op",
                "show",
                "show | add | sub | mul | div | inverse | pow | norm | digits | shadow",
            ),
            opt("e", "Exponent for pow, digit count for digits, or m for shadow"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let prec: u32 = get(m, "prec")?;
        let op = raw(m, "op")?;
        if op == "shadow" {
            let mm: u64 = get(m, "e")?;
            let mut r = Report::new(self.name(), &["m", "p", "ideal"]);
            let e = ideal_shadow(mm, p)?;
            r.row([mm.to_string(), p.to_string(), format!("{p}^{e} Z_{p}")]);
            return Ok(r);
        }
        let x = if op == "show" || op == "norm" || op == "digits" {
            // a plain rational goes through the documented conversion
            match rational(m, "x") {
                Ok(q) => padic_of_rational(&q, p, prec)?,
                Err(_) => padic_arg(m, "x", p, prec)?,
            }
        } else {
            padic_arg(m, "x", p, prec)?
        };
        let y = || padic_arg(m, "y", p, prec);
        let value: PadicNumber = match op {
            "show" => x.clone(),
            "add" => x.add(&y()?)?,
            "sub" => x.sub(&y()?)?,
            "mul" => x.mul(&y()?)?,
            "div" => x.div(&y()?)?,
            "inverse" => x.inverse()?,
            "pow" => x.pow(get(m, "e")?)?,
            "norm" => {
                let mut r = Report::new(self.name(), &["value"]);
                r.row([padic_norm(&x)]);
                return Ok(r);
            }
            "digits" => {
                let count: u32 = get_opt(m, "e")?.unwrap_or(prec);
                let d = x.digits(count)?;
                let mut r = Report::new(self.name(), &["index", "digit"]);
                for (i, d) in d.iter().enumerate() {
                    r.row([i.to_string(), d.to_string()]);
                }
                return Ok(r);
            }
            other => return usage(format!("unknown --op {other:?}")),
        };
        let mut r = Report::new(self.name(), &["triple", "digits", "valuation", "absolute_precision"]);
        r.row([
            value.to_triple_string(),
            value.to_string(),
            value.valuation().map_or("inf".into(), |v| v.to_string()),
            value.absolute_precision().map_or("inf".into(), |v| v.to_string()),
        ]);
        Ok(r)
    }
}

pub struct Teichmuller;

impl Command for Teichmuller {
    fn name(&self) -> &'static str {
        "teichmuller"
    }

    fn about(&self) -> &'static str {
        "Teichmüller lifts, their two-prime CRT combination and <b> = b/omega(b)"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "Prime"),
            opt("q", "Second prime: switch to the double lift mod p^prec q^l"),
            opt("n", "Integer to lift (comma list allowed)"),
            def("prec", "6", "Precision exponent M for p"),
            def("l", "6", "Precision exponent L for q"),
            flag("total", "Send multiples of p to 0 instead of failing"),
            flag("bracket", "Print <n> in Z_p and Z_q instead of the lift"),
            opt("crt", "a,b: combine residues a mod p^prec and b mod q^l"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let prec: u32 = get(m, "prec")?;
        let l: u32 = get(m, "l")?;
        let q: Option<u64> = get_opt(m, "q")?;
        if let Some(q) = q {
            let pair = PrimePair::new(p, q)?;
            if has(m, "crt") {
                let (a, b) = pair_of(raw(m, "crt")?, "crt")?;
                let v = crt_pair(&parse(a, "crt")?, &parse(b, "crt")?, pair, prec, l);
                let mut r = Report::new(self.name(), &["value"]);
                r.row([v]);
                return Ok(r);
            }
            let ns: Vec<i64> = crate::registry::list(m, "n")?;
            if on(m, "bracket") {
                let mut r = Report::new(self.name(), &["n", "bracket_p", "bracket_q"]);
                for n in ns {
                    let (bp, bq) = angle_bracket(n, pair, prec, l)?;
                    r.row([n.to_string(), bp.to_string(), bq.to_string()]);
                }
                return Ok(r);
            }
            let mut r = Report::new(self.name(), &["n", "lift", "check"]);
            let modulus = padic_interp::modular::pow_u(p, prec) * padic_interp::modular::pow_u(q, l);
            for n in ns {
                let w = double_teichmuller(n, pair, prec, l)?;
                let fixed = w.modpow(&num_bigint::BigUint::from((p - 1) * (q - 1)), &modulus);
                let ok = fixed == num_bigint::BigUint::from(1u32) % &modulus || w == num_bigint::BigUint::from(0u32);
                if !ok {
                    r.fail(format!("omega({n})^((p-1)(q-1)) = {fixed} != 1"));
                }
                r.row([n.to_string(), w.to_string(), if ok { "root of unity" } else { "FAIL" }.to_string()]);
            }
            return Ok(r);
        }
        if has(m, "crt") || on(m, "bracket") {
            return usage("--crt and --bracket need --q");
        }
        let ns: Vec<i64> = crate::registry::list(m, "n")?;
        let modulus = padic_interp::modular::pow_u(p, prec);
        let mut r = Report::new(self.name(), &["n", "lift", "check"]);
        for n in ns {
            let w = if on(m, "total") { teichmuller_total(n, p, prec)? } else { teichmuller(n, p, prec)? };
            let fixed = w.modpow(&num_bigint::BigUint::from(p), &modulus);
            let congruent = (num_bigint::BigInt::from(n) - num_bigint::BigInt::from(w.clone())) % p as i64
                == num_bigint::BigInt::from(0);
            let ok = fixed == w && congruent;
            if !ok {
                r.fail(format!("lift of {n} mod {p}^{prec} is not a fixed point of x^p congruent to n"));
            }
            r.row([n.to_string(), w.to_string(), if ok { "w^p = w, w = n mod p" } else { "FAIL" }.to_string()]);
        }
        Ok(r)
    }
}

pub(crate) fn pair_of<'a>(s: &'a str, name: &str) -> CliResult<(&'a str, &'a str)> {
    match s.split_once(',') {
        Some((a, b)) => Ok((a.trim(), b.trim())),
        None => usage(format!("--{name} expects two comma-separated values")),
    }
}

pub(crate) fn parse<T: std::str::FromStr>(s: &str, name: &str) -> CliResult<T> {
    s.parse().map_err(|_| crate::registry::CliError::Usage(format!("--{name}: cannot parse {s:?}")))
}
