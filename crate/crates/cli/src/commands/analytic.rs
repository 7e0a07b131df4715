use std::f64::consts::PI;

use clap::{Arg, ArgMatches};
use padic_interp::analytic::{
    completed_zeta, completed_zeta_dirichlet, euler_product_check, functional_equation_row, theta,
    theta_transform_residual, weil_finite, zeta_from_completed,
};

use crate::registry::{def, get, has, list, opt, raw, usage, CliResult, Command};
use crate::report::Report;

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

pub struct ThetaCheck;

impl Command for ThetaCheck {
    fn name(&self) -> &'static str {
        "theta-check"
    }

    fn about(&self) -> &'static str {
        "Residual of omega(1/x) = sqrt(x) omega(x)"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            opt("x", "Points (comma list); default 33 points log-spaced on [1/8, 8]"),
            def("tol", "1e-12", "Tolerance"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let xs: Vec<f64> = if has(m, "x") {
            list(m, "x")?
        } else {
            (0..=32).map(|k| 2f64.powf(-3.0 + 6.0 * k as f64 / 32.0)).collect()
        };
        let tol: f64 = get(m, "tol")?;
        let mut r = Report::new(self.name(), &["x", "omega(x)", "omega(1/x)", "residual"]);
        for x in xs {
            let res = theta_transform_residual(x)?;
            if !(res < tol) {
                r.fail(format!("x={x}: residual {res:.3e}"));
            }
            r.row([format!("{x:.6}"), format!("{:.15}", theta(x)?), format!("{:.15}", theta(1.0 / x)?), sci(res)]);
        }
        Ok(r)
    }
}

pub struct LambdaCheck;

impl Command for LambdaCheck {
    fn name(&self) -> &'static str {
        "lambda-check"
    }

    fn about(&self) -> &'static str {
        "Completed zeta: symmetry, Dirichlet agreement, trivial zeros and the Euler product"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("mode", "fe", "fe | dirichlet | zeta | euler"),
            opt("s", "Points (comma list); each mode has its own default grid"),
            def("nodes", "200", "Gauss-Legendre nodes"),
            def("tol", "1e-10", "Tolerance (fe, dirichlet, zeta)"),
            def("prime-bound", "10000", "Euler product over p <= P"),
            def("term-bound", "1000000", "Dirichlet sum over n <= M"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let mode = raw(m, "mode")?;
        let grid = |default: &[f64]| -> CliResult<Vec<f64>> {
            if has(m, "s") {
                list(m, "s")
            } else {
                Ok(default.to_vec())
            }
        };
        let nodes: usize = get(m, "nodes")?;
        let tol: f64 = get(m, "tol")?;
        let mut r;
        match mode {
            "fe" => {
                r = Report::new(self.name(), &["s", "lambda(s)", "lambda(1-s)", "residual"]);
                for s in grid(&[0.25, 0.4, 0.75, 2.0, 3.0])? {
                    let row = functional_equation_row(s, nodes)?;
                    if !(row.residual < tol) {
                        r.fail(format!("s={s}: |lambda(s) - lambda(1-s)| = {:.3e}", row.residual));
                    }
                    r.row([s.to_string(), format!("{:.15}", row.lhs), format!("{:.15}", row.rhs), sci(row.residual)]);
                }
            }
            "dirichlet" => {
                r = Report::new(self.name(), &["s", "theta_integral", "dirichlet_series", "residual"]);
                for s in grid(&[2.0, 2.5, 3.0, 4.0])? {
                    let a = completed_zeta(s, nodes)?;
                    let b = completed_zeta_dirichlet(s)?;
                    let res = (a - b).abs();
                    if !(res < tol) {
                        r.fail(format!("s={s}: {a} vs {b}"));
                    }
                    r.row([s.to_string(), format!("{a:.15}"), format!("{b:.15}"), sci(res)]);
                }
                if !has(m, "s") {
                    let a = completed_zeta(2.0, nodes)?;
                    let res = (a - PI / 6.0).abs();
                    if !(res < tol) {
                        r.fail(format!("lambda(2) = {a}, not pi/6"));
                    }
                    r.row(["2 (pi/6)".to_string(), format!("{a:.15}"), format!("{:.15}", PI / 6.0), sci(res)]);
                }
            }
            "zeta" => {
                // values on the continuation: -1/12 at -1, trivial zeros at -2, -4
                r = Report::new(self.name(), &["s", "zeta(s)", "expected", "residual"]);
                let points = grid(&[-1.0, -2.0, -3.0, -4.0])?;
                for s in points {
                    let z = zeta_from_completed(s, nodes)?;
                    let want = expected_zeta(s);
                    let res = want.map(|w| (z - w).abs());
                    if let Some(res) = res.filter(|x| !(*x < tol)) {
                        r.fail(format!("zeta({s}) = {z}, residual {res:.3e}"));
                    }
                    r.row([
                        s.to_string(),
                        format!("{z:.15}"),
                        want.map_or("-".to_string(), |w| format!("{w:.15}")),
                        res.map_or("-".to_string(), sci),
                    ]);
                }
            }
            "euler" => {
                let pb: u64 = get(m, "prime-bound")?;
                let tb: u64 = get(m, "term-bound")?;
                r = Report::new(self.name(), &["s", "product", "partial_sum", "residual", "bound"]);
                for s in grid(&[1.5, 2.0, 3.0])? {
                    let e = euler_product_check(s, pb, tb)?;
                    if !e.within_bound() {
                        r.fail(format!("s={s}: residual {:.3e} exceeds bound {:.3e}", e.residual, e.bound));
                    }
                    r.row([s.to_string(), format!("{:.15}", e.product), format!("{:.15}", e.partial_sum), sci(e.residual), sci(e.bound)]);
                }
            }
            other => return usage(format!("unknown --mode {other:?}")),
        }
        Ok(r)
    }
}

/// `ζ(-k) = (-1)^k B_(k+1)/(k+1)` at negative integers, from the exact table.
fn expected_zeta(s: f64) -> Option<f64> {
    use num_traits::ToPrimitive;
    if s < 0.0 && s.fract() == 0.0 {
        padic_interp::rational::zeta_neg((-s) as u64).to_f64()
    } else {
        None
    }
}

pub struct Weil;

impl Command for Weil {
    fn name(&self) -> &'static str {
        "weil"
    }

    fn about(&self) -> &'static str {
        "Finite-prime term of the Weil explicit formula"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("p", "5", "Prime"),
            def("n-bound", "20", "Sum over 0 < |n| <= N"),
            def("f", "gauss", "gauss | indicator:k (indicator of x = p^k)"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let p: u64 = get(m, "p")?;
        let nb: u32 = get(m, "n-bound")?;
        let spec = raw(m, "f")?;
        let pf = p as f64;
        let mut r = Report::new(self.name(), &["p", "N", "f", "value", "reference"]);
        let (value, reference) = match spec.split_once(':') {
            None if spec == "gauss" => {
                let g = |x: f64| (-(x.ln()).powi(2)).exp();
                let v = weil_finite(&g, p, nb)?;
                // g(p^n) = g(p^-n), so the sum is twice its positive half
                let half: f64 = (1..=nb).map(|n| pf.powf(-(n as f64) / 2.0) * g(pf.powi(n as i32))).sum();
                (v, 2.0 * pf.ln() * half)
            }
            Some(("indicator", k)) => {
                let k: i32 = super::arith::parse(k, "f")?;
                let target = pf.powi(k);
                let f = move |x: f64| if ((x - target) / target).abs() < 1e-12 { 1.0 } else { 0.0 };
                let v = weil_finite(&f, p, nb)?;
                let expected = if k != 0 && k.unsigned_abs() <= nb { pf.ln() * pf.powf(-(k.abs() as f64) / 2.0) } else { 0.0 };
                (v, expected)
            }
            _ => return usage("--f must be gauss or indicator:k"),
        };
        if (value - reference).abs() > 1e-12 * reference.abs().max(1.0) {
            r.fail(format!("sum {value} vs reference {reference}"));
        }
        r.row([p.to_string(), nb.to_string(), spec.to_string(), format!("{value:.15e}"), format!("{reference:.15e}")]);
        Ok(r)
    }
}
