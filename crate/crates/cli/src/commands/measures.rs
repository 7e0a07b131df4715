use clap::{Arg, ArgMatches};
use padic_interp::measures::{
    binomial_moments, binomial_moments_taylor, delta_operator, double_moment, measure_on_open_set, moment_closed_form,
    moments, psi_r_element, psi_r_series, restricted_moment, restricted_moment_closed_form, xi, xi_sum_zero,
};
use padic_interp::rational::{is_p_integral, rat, zeta_neg};
use padic_interp::{BigRational, PadicNumber, PrimePair};

use crate::registry::{def, get, get_opt, has, opt, raw, usage, CliResult, Command};
use crate::report::Report;

pub struct Moments;

impl Moments {
    fn pair(m: &ArgMatches) -> CliResult<PrimePair> {
        Ok(PrimePair::new(get(m, "p")?, get(m, "q")?)?)
    }
}

fn verdict(r: &mut Report, ok: bool, what: impl FnOnce() -> String) -> &'static str {
    if ok {
        "agree"
    } else {
        r.fail(what());
        "DIFFER"
    }
}

impl Command for Moments {
    fn name(&self) -> &'static str {
        "moments"
    }

    fn about(&self) -> &'static str {
        "Moments of the regularized zeta measures, each computed two ways"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("kind", "single", "single | double | restricted | binomial | delta | xi | series"),
            def("a", "2", "Regularizing integer a >= 2"),
            def("r", "1", "Scale r >= 1"),
            def("m", "8", "Largest moment index"),
            def("p", "5", "First prime (double, restricted, delta)"),
            def("q", "7", "Second prime (double, restricted)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let a: u64 = get(m, "a")?;
        let r_: u64 = get(m, "r")?;
        let max: u64 = get(m, "m")?;
        let kind = raw(m, "kind")?;
        let mut r;
        match kind {
            "single" => {
                r = Report::new(self.name(), &["m", "series_slot", "closed_form", "status"]);
                for (k, v) in moments(a, r_, max)?.into_iter().enumerate() {
                    let c = moment_closed_form(a, r_, k as u64);
                    let s = verdict(&mut r, v == c, || format!("m={k}: {v} vs {c}"));
                    r.row([k.to_string(), v.to_string(), c.to_string(), s.to_string()]);
                }
            }
            "double" => {
                let pair = Self::pair(m)?;
                r = Report::new(self.name(), &["m", "moment", "closed_form", "p_integral", "status"]);
                for k in 0..=max {
                    let v = double_moment(a, pair, k)?;
                    let qm = rat(pair.q() as i64).pow(k as i32);
                    let c = (rat(1) - rat(a as i64).pow(k as i32 + 1)) * (rat(1) - qm) * zeta_neg(k);
                    let integral = is_p_integral(&v, pair.p());
                    let s = verdict(&mut r, v == c && integral, || format!("m={k}: {v} vs {c}, p-integral {integral}"));
                    r.row([k.to_string(), v.to_string(), c.to_string(), integral.to_string(), s.to_string()]);
                }
            }
            "restricted" => {
                let pair = Self::pair(m)?;
                r = Report::new(self.name(), &["m", "twisted_series", "closed_form", "status"]);
                for k in 0..=max {
                    let v = restricted_moment(a, pair, k)?;
                    let c = restricted_moment_closed_form(a, pair, k);
                    let s = verdict(&mut r, v == c, || format!("m={k}: {v} vs {c}"));
                    r.row([k.to_string(), v.to_string(), c.to_string(), s.to_string()]);
                }
            }
            "binomial" => {
                r = Report::new(self.name(), &["k", "d_k", "taylor_route", "status"]);
                let d = binomial_moments(a, max as usize)?;
                let t = binomial_moments_taylor(a, max as usize)?;
                for (k, (x, y)) in d.iter().zip(&t).enumerate() {
                    let s = verdict(&mut r, x == y, || format!("k={k}: {x} vs {y}"));
                    r.row([k.to_string(), x.to_string(), y.to_string(), s.to_string()]);
                }
            }
            "delta" => {
                let p: u64 = get(m, "p")?;
                let f = psi_r_element(a, 1, Some(p))?;
                let d = binomial_moments(a, max as usize)?;
                r = Report::new(self.name(), &["n", "delta_n_psi_at_1", "d_n", "den_at_1", "status"]);
                for (n, dn) in d.iter().enumerate() {
                    let g = delta_operator(&f, n)?;
                    let v = g.eval_at_one();
                    let den = g.den().eval(&rat(1));
                    let s = verdict(&mut r, &v == dn, || format!("n={n}: {v} vs {dn}"));
                    r.row([n.to_string(), v.to_string(), dn.to_string(), den.to_string(), s.to_string()]);
                }
            }
            "xi" => {
                r = Report::new(self.name(), &["n", "xi"]);
                for n in 1..=max as i64 {
                    r.row([n.to_string(), xi(n, a, r_)?.to_string()]);
                }
                let total = xi_sum_zero(a, r_)?;
                r.row(["sum_b xi(br)".to_string(), total.to_string()]);
                if total != 0 {
                    r.fail(format!("sum of xi_r(br) over b <= a is {total}"));
                }
            }
            "series" => {
                r = Report::new(self.name(), &["k", "coefficient", "slot"]);
                let s = psi_r_series(a, r_, max.max(1) as usize)?;
                for k in 0..=max as usize {
                    r.row([k.to_string(), s.coeff(k).to_string(), s.slot(k).to_string()]);
                }
            }
            other => return usage(format!("unknown --kind {other:?}")),
        }
        Ok(r)
    }
}

pub struct OpenSet;

impl Command for OpenSet {
    fn name(&self) -> &'static str {
        "open-set-measure"
    }

    fn about(&self) -> &'static str {
        "Measure of b + p^n Z_p through the Mahler series, against a closed form"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("a", "2", "Regularizing integer a, prime to p"),
            def("p", "5", "Prime"),
            def("n", "1", "Level n"),
            opt("b", "Residue b (default: every residue, with an additivity check)"),
            def("prec", "4", "Target absolute precision"),
            opt("l", "Explicit truncation L (overrides --prec)"),
            def("closed-form", "conjectured", "conjectured | hurwitz: the form compared against"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let a: u64 = get(m, "a")?;
        let p: u64 = get(m, "p")?;
        let n: u32 = get(m, "n")?;
        let pn = p.pow(n);
        let l: u64 = match get_opt(m, "l")? {
            Some(l) => l,
            None => get::<u64>(m, "prec")? * pn - 1,
        };
        let hurwitz = match raw(m, "closed-form")? {
            "conjectured" => false,
            "hurwitz" => true,
            other => return usage(format!("--closed-form must be conjectured or hurwitz, got {other:?}")),
        };
        let all = !has(m, "b");
        let bs: Vec<u64> = if all { (0..pn).collect() } else { vec![get(m, "b")?] };
        let mut r = Report::new(self.name(), &["b", "series_value", "precision", "closed_form", "status"]);
        let mut total = BigRational::from_integer(0.into());
        let mut prec = i64::MAX;
        for b in bs {
            let mu = measure_on_open_set(a, p, n, b, l)?;
            let (form, ok) = if hurwitz {
                (mu.hurwitz_form.clone(), mu.matches_hurwitz_form()?)
            } else {
                (mu.closed_form.clone(), mu.matches_closed_form()?)
            };
            let abs = mu.value.absolute_precision().unwrap_or(0);
            if !ok {
                r.fail(format!("b={b}: series {} but closed form {form} (mod {p}^{abs})", mu.partial_sum));
            }
            total += &mu.partial_sum;
            prec = prec.min(abs);
            r.row([
                b.to_string(),
                mu.value.to_string(),
                abs.to_string(),
                form.to_string(),
                if ok { "agree" } else { "DIFFER" }.to_string(),
            ]);
        }
        if all {
            // the residues partition Z_p, whose measure is d_0 = (1 - a) zeta(0)
            let whole = moment_closed_form(a, 1, 0);
            let lhs = PadicNumber::from_rational_abs(&total, p, prec)?;
            let ok = lhs.congruent(&PadicNumber::from_rational_abs(&whole, p, prec)?, prec)?;
            if !ok {
                r.fail(format!("sum over residues is {total}, not {whole} mod {p}^{prec}"));
            }
            r.row([
                "sum".to_string(),
                lhs.to_string(),
                prec.to_string(),
                whole.to_string(),
                if ok { "additive" } else { "NOT ADDITIVE" }.to_string(),
            ]);
        }
        Ok(r)
    }
}
