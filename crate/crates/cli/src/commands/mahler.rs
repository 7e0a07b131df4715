use clap::{Arg, ArgMatches};
use num_bigint::BigInt;
use padic_interp::gamma::morita_gamma_exact;
use padic_interp::mahler::{
    binomial_inversion, characteristic_mahler, difference_operator, evaluate_mahler, forward_binomial,
    mahler_coefficients, verify_decay, IntegerSequenceFn, MahlerSeries,
};
use padic_interp::rational::{int_rat, rat};
use padic_interp::{BigRational, PadicNumber, PolyRational};

use super::arith::{pair_of, parse};
use crate::registry::{def, flag, get, has, on, opt, padic_arg, raw, usage, CliResult, Command};
use crate::report::Report;

const FUNCTION_HELP: &str = "values:v0,v1,... | poly:c0,c1,... | gamma | char:b,n";

/// A sampled function on `0..=l`, or a characteristic function as `(b, n)`.
enum Source {
    Sequence(IntegerSequenceFn),
    Characteristic(u64, u32),
}

fn source(spec: &str, p: u64, l: u64) -> CliResult<Source> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let f = match kind {
        "values" => {
            let vals: Vec<BigRational> =
                rest.split(',').map(|v| parse::<BigRational>(v.trim(), "function")).collect::<CliResult<_>>()?;
            if vals.is_empty() {
                return usage("values: needs at least one value");
            }
            IntegerSequenceFn::from_values(vals)
        }
        "poly" => {
            let cs: Vec<BigRational> =
                rest.split(',').map(|v| parse::<BigRational>(v.trim(), "function")).collect::<CliResult<_>>()?;
            let poly = PolyRational::new(cs);
            IntegerSequenceFn::new(l, move |x| poly.eval(&rat(x as i64)))
        }
        "gamma" => {
            padic_interp::modular::require_prime(p)?;
            if p == 2 {
                return usage("Morita gamma is defined here for odd p only");
            }
            IntegerSequenceFn::new(l, move |x| int_rat(morita_gamma_exact(x, p).expect("odd prime checked")))
        }
        "char" => {
            let (b, n) = pair_of(rest, "function")?;
            return Ok(Source::Characteristic(parse(b, "function")?, parse(n, "function")?));
        }
        _ => return usage(format!("--function must be one of {FUNCTION_HELP}")),
    };
    Ok(Source::Sequence(f))
}

fn sequence(src: Source, p: u64, l: u64) -> CliResult<IntegerSequenceFn> {
    Ok(match src {
        Source::Sequence(f) => f,
        Source::Characteristic(b, n) => {
            let pn = p.checked_pow(n).ok_or_else(|| crate::registry::CliError::Usage("p^n overflows".into()))?;
            IntegerSequenceFn::new(l, move |x| rat((x % pn == b) as i64))
        }
    })
}

fn series(src: Source, p: u64, l: u64, prec: u32) -> CliResult<MahlerSeries> {
    Ok(match src {
        Source::Characteristic(b, n) => characteristic_mahler(b, n, p, l, prec)?,
        Source::Sequence(f) => mahler_coefficients(&f, l, p, prec)?,
    })
}

pub struct MahlerCoeffs;

impl Command for MahlerCoeffs {
    fn name(&self) -> &'static str {
        "mahler-coeffs"
    }

    fn about(&self) -> &'static str {
        "Mahler coefficients of a sampled function, checked by the forward binomial sum"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("function", "gamma", FUNCTION_HELP),
            def("p", "5", "Prime"),
            def("l", "24", "Window: coefficients a_0..a_L"),
            def("prec", "8", "Relative precision of the p-adic coefficients"),
            flag("text", "Emit the line-oriented series text instead of a table"),
            flag("exact", "Show exact rational coefficients"),
            opt("diff", "n,x: print the difference operator (Delta^n f)(x)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let l: u64 = get(m, "l")?;
        let prec: u32 = get(m, "prec")?;
        let spec = raw(m, "function")?;
        if has(m, "diff") {
            let (n, x) = pair_of(raw(m, "diff")?, "diff")?;
            let f = sequence(source(spec, p, l)?, p, l)?;
            let mut r = Report::new(self.name(), &["value"]);
            r.row([difference_operator(&f, parse(n, "diff")?, parse(x, "diff")?)?]);
            return Ok(r);
        }
        let src = source(spec, p, l)?;
        if on(m, "text") {
            let s = series(src, p, l, prec)?;
            let mut r = Report::new(self.name(), &["series"]);
            r.row([s.to_text().trim_end()]);
            return Ok(r);
        }
        let f = sequence(src, p, l)?;
        let values = f.values(l)?;
        let exact = binomial_inversion(&values);
        let back = forward_binomial(&exact);
        let s = series(source(spec, p, l)?, p, l, prec)?;
        let mut r = Report::new(self.name(), &["n", "value", "coefficient", "valuation"]);
        for (n, c) in exact.iter().enumerate() {
            let shown = if on(m, "exact") { c.to_string() } else { s.coeffs[n].to_string() };
            let v = s.coeffs[n].valuation().map_or("inf".to_string(), |v| v.to_string());
            r.row([n.to_string(), values[n].to_string(), shown, v]);
        }
        if let Some(n) = back.iter().zip(&values).position(|(a, b)| a != b) {
            r.fail(format!("forward sum at {n} gives {} instead of {}", back[n], values[n]));
        }
        Ok(r)
    }
}

pub struct MahlerEval;

impl Command for MahlerEval {
    fn name(&self) -> &'static str {
        "mahler-eval"
    }

    fn about(&self) -> &'static str {
        "Evaluate a Mahler series at a p-adic integer"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            opt("series", "File holding series text (as printed by mahler-coeffs --text)"),
            def("function", "char:1,1", FUNCTION_HELP),
            def("p", "5", "Prime"),
            def("l", "24", "Window when building from --function"),
            opt("certify", "s,t: attach a decay certificate once the window confirms it"),
            def("prec", "8", "Precision"),
            opt("x", "Point: rational, digit expansion or (v, u, r)_p; comma list of naturals also accepted"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let prec: u32 = get(m, "prec")?;
        let (s, sampled) = if has(m, "series") {
            let path = raw(m, "series")?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| crate::registry::CliError::Usage(format!("--series {path}: {e}")))?;
            (MahlerSeries::from_text(&text)?, None)
        } else {
            let p: u64 = get(m, "p")?;
            let l: u64 = get(m, "l")?;
            let spec = raw(m, "function")?;
            let f = sequence(source(spec, p, l)?, p, l)?;
            let mut s = series(source(spec, p, l)?, p, l, prec)?;
            if has(m, "certify") {
                let (cs, ct) = pair_of(raw(m, "certify")?, "certify")?;
                let d = verify_decay(&f, p, parse(cs, "certify")?, parse(ct, "certify")?, l)?;
                match (d.hypothesis_holds, d.certificate()) {
                    (true, Some(c)) => s = s.with_certificate(c),
                    _ => return usage(format!("the window does not support a decay certificate for {spec}")),
                }
            }
            (s, Some(f))
        };
        let p = s.p;
        let xs: Vec<PadicNumber> = match raw(m, "x")? {
            list if list.contains(',') && !list.contains('(') => list
                .split(',')
                .map(|v| Ok(PadicNumber::from_rational(&parse::<BigRational>(v.trim(), "x")?, p, prec)?))
                .collect::<CliResult<_>>()?,
            _ => vec![padic_arg(m, "x", p, prec)?],
        };
        let mut r = Report::new(self.name(), &["x", "value", "terms", "status"]);
        for x in xs {
            let e = evaluate_mahler(&s, &x)?;
            let mut status = if e.heuristic { "uncertified" } else { "certified" }.to_string();
            // at a natural inside the window the sum must reproduce the sample
            if let (Some(f), Ok(n)) = (&sampled, x.lift()) {
                if let Some(n) = padic_interp::modular::small(&n).filter(|&n| n < s.coeffs.len() as u64) {
                    if x.valuation().is_none_or(|v| v >= 0) && x.to_rational() == int_rat(BigInt::from(n)) {
                        let want = PadicNumber::from_rational(&f.at(n)?, p, prec)?;
                        if e.value.congruent(&want, e.value.absolute_precision().unwrap_or(prec as i64))? {
                            status.push_str(", matches sample");
                        } else {
                            r.fail(format!("value at {n} is {} but the sample is {}", e.value, f.at(n)?));
                        }
                    }
                }
            }
            r.row([x.to_string(), e.value.to_string(), e.terms_used.to_string(), status]);
        }
        Ok(r)
    }
}

pub struct DecayCheck;

impl Command for DecayCheck {
    fn name(&self) -> &'static str {
        "decay-check"
    }

    fn about(&self) -> &'static str {
        "Check |a_n|_p <= p^-sigma for n >= sigma p^t on a window"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("function", "gamma", FUNCTION_HELP),
            def("p", "5", "Prime"),
            def("s", "3", "Largest sigma"),
            opt("t", "Period exponent t (comma list allowed; default 1)"),
            opt("l", "Window L (default 3 p^t s)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let s: u32 = get(m, "s")?;
        let ts: Vec<u32> = if has(m, "t") { crate::registry::list(m, "t")? } else { vec![1] };
        let spec = raw(m, "function")?;
        let mut r = Report::new(
            self.name(),
            &["t", "window", "observed_modulus", "hypothesis", "violation", "status"],
        );
        for t in ts {
            let l: u64 = match crate::registry::get_opt(m, "l")? {
                Some(l) => l,
                None => 3 * p.pow(t) * s as u64,
            };
            let f = sequence(source(spec, p, l)?, p, l)?;
            let d = verify_decay(&f, p, s, t, l)?;
            let violation = d
                .violation
                .as_ref()
                .map_or("none".to_string(), |v| format!("sigma={} n={} v={}", v.sigma, v.index, v.valuation));
            let status = match (&d.violation, d.hypothesis_holds) {
                (None, _) => "bound holds",
                (Some(_), false) => "outside hypothesis",
                (Some(_), true) => "VIOLATION",
            };
            if d.hypothesis_holds && d.violation.is_some() {
                r.fail(format!("t={t}: {violation} although f(x+p^t) = f(x) mod p^{s}"));
            }
            r.row([
                t.to_string(),
                l.to_string(),
                d.observed_modulus.to_string(),
                if d.hypothesis_holds { "holds" } else { "fails" }.to_string(),
                violation,
                status.to_string(),
            ]);
        }
        Ok(r)
    }
}
