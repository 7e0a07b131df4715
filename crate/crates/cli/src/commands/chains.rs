use clap::{Arg, ArgMatches};
use num_traits::Zero;
use padic_interp::chains::{
    check_stochastic, crt_u, gram_schmidt_monomials, hahn_basis, heisenberg_residual, limit_check, propagate,
    q_integer, q_integer_total, q_zeta, real_beta_layer_closed_form, tau_inner, u_gamma_shadow, KernelRegistry,
    LimitTarget, Value,
};
use padic_interp::rational::rat;
use padic_interp::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::registry::{def, flag, get, get_opt, has, list, on, opt, raw, rational, usage, CliResult, Command};
use crate::report::Report;

#[derive(Default)]
pub struct ChainPropagate {
    kernels: KernelRegistry,
}

impl Command for ChainPropagate {
    fn name(&self) -> &'static str {
        "chain-propagate"
    }

    fn about(&self) -> &'static str {
        "Layer distributions of a beta-type chain, with stochasticity checks"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("kernel", "real-beta:alpha=1,beta=1", "family:key=value,... (families: p-beta, p-gamma, q-beta, real-beta, q-gamma, basic, u-gamma)"),
            def("layers", "4", "Layer n to report"),
            def("depth", "12", "Depth of the row-stochasticity check"),
            flag("closed-form", "Compare with the rising-factorial closed form (real-beta only)"),
            flag("families", "List the registered kernel families"),
            opt("u-shadow", "m,p1,p2,...: build u = p mod p^m for all p and compare u^-beta with p^-beta"),
            def("beta", "1", "beta for --u-shadow"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        if on(m, "families") {
            let mut r = Report::new(self.name(), &["family", "params"]);
            for f in self.kernels.families() {
                r.row([f.to_string(), self.kernels.params(f).unwrap_or(&[]).join(",")]);
            }
            return Ok(r);
        }
        if has(m, "u-shadow") {
            let args: Vec<u64> = list(m, "u-shadow")?;
            let (&mm, primes) = args.split_first().ok_or_else(|| crate::registry::CliError::Usage("--u-shadow needs m and primes".into()))?;
            let beta: u32 = get(m, "beta")?;
            let u = crt_u(primes, mm as u32)?;
            let mut r = Report::new(self.name(), &["u", "p", "valuation", "relative_agreement", "status"]);
            for &p in primes {
                let s = u_gamma_shadow(&u, beta, p, mm as u32)?;
                let need = mm as i64 - 1;
                let ok = s.valuation == -(beta as i64) && s.agreement >= need.min(mm as i64 - 1);
                if !ok {
                    r.fail(format!("p={p}: u^-beta agrees with p^-beta only to {} digits", s.agreement));
                }
                let agreement = if s.agreement == i64::MAX { "exact".to_string() } else { s.agreement.to_string() };
                r.row([u.to_string(), p.to_string(), s.valuation.to_string(), agreement, if ok { "pass" } else { "FAIL" }.to_string()]);
            }
            return Ok(r);
        }
        let spec = raw(m, "kernel")?;
        let kernel = self.kernels.build(spec)?;
        let depth: u64 = get(m, "depth")?;
        let n: u64 = get(m, "layers")?;
        let mut r = Report::new(self.name(), &["i", "j", "weight", "closed_form", "status"]);
        if let Err(e) = check_stochastic(kernel.as_ref(), depth) {
            r.fail(format!("{}: {e}", kernel.spec()));
        }
        let layer = propagate(kernel.as_ref(), n);
        let closed = if on(m, "closed-form") {
            if kernel.family() != "real-beta" {
                return usage("--closed-form applies to real-beta kernels only");
            }
            let params = padic_interp::chains::KernelParams::parse(spec.split_once(':').map_or("", |x| x.1))?;
            let exact = |k: &str| -> CliResult<BigRational> {
                match params.value(k)? {
                    Value::Exact(x) => Ok(x),
                    Value::Float(_) => usage("--closed-form needs exact alpha and beta"),
                }
            };
            Some(real_beta_layer_closed_form(&exact("alpha")?, &exact("beta")?, n)?)
        } else {
            None
        };
        for ((i, j), w) in &layer.weights {
            let (c, status) = match &closed {
                Some(c) => {
                    let want = c.weights.get(&(*i, *j)).cloned().unwrap_or_else(Value::zero);
                    let ok = w.abs_diff(&want) == 0.0 && w.is_exact();
                    if !ok {
                        r.fail(format!("({i}, {j}): propagated {w} vs closed form {want}"));
                    }
                    (want.to_string(), if ok { "exact" } else { "DIFFER" })
                }
                None => ("-".to_string(), "-"),
            };
            r.row([i.to_string(), j.to_string(), w.to_string(), c, status.to_string()]);
        }
        let total = layer.total();
        if total.abs_diff(&Value::one()) > 1e-12 {
            r.fail(format!("layer {n} has total mass {total}"));
        }
        Ok(r)
    }
}

pub struct ChainLimits;

impl Command for ChainLimits {
    fn name(&self) -> &'static str {
        "chain-limits"
    }

    fn about(&self) -> &'static str {
        "Convergence of the q-beta chain to the p-adic or real beta chain"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("target", "padic", "padic | real"),
            def("p", "5", "Prime for the p-adic target"),
            def("q0", "0.5", "Base q0 for the real target"),
            def("alpha", "1", "alpha"),
            def("beta", "1", "beta"),
            def("schedule", "4,8,16,32", "Values of N"),
            def("depth", "12", "States with i + j <= depth are compared"),
            def("tol", "1e-6", "Tolerance on the final error"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let target = match raw(m, "target")? {
            "padic" => LimitTarget::Padic { p: get(m, "p")? },
            "real" => LimitTarget::Real { q0: get(m, "q0")? },
            other => return usage(format!("--target must be padic or real, got {other:?}")),
        };
        let tol: f64 = get(m, "tol")?;
        let rep = limit_check(target, get(m, "alpha")?, get(m, "beta")?, &list::<u32>(m, "schedule")?, get(m, "depth")?, tol)?;
        let mut r = Report::new(self.name(), &["N", "sup_error", "root_up"]);
        for row in &rep.rows {
            r.row([row.n.to_string(), format!("{:.6e}", row.sup_error), format!("{:.12}", row.root_up)]);
        }
        if !rep.passed() {
            r.fail(format!(
                "final error {:.3e} against tolerance {tol:.1e} (monotone: {})",
                rep.final_error(),
                rep.monotone
            ));
        }
        Ok(r)
    }
}

pub struct Heisenberg;

impl Command for Heisenberg {
    fn name(&self) -> &'static str {
        "heisenberg"
    }

    fn about(&self) -> &'static str {
        "Exact residual of D D+ - D+ D - ((alpha+beta)/2) id on trial vectors"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("alpha", "1", "alpha (rational)"),
            def("beta", "1", "beta (rational)"),
            def("n", "1,2,3,4,5,6", "Layers (comma list)"),
            def("random", "3", "Random integer trial vectors per layer, besides the unit vectors"),
            def("seed", "1", "RNG seed"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let alpha = rational(m, "alpha")?;
        let beta = rational(m, "beta")?;
        let random: usize = get(m, "random")?;
        let mut rng = StdRng::seed_from_u64(get(m, "seed")?);
        let mut r = Report::new(self.name(), &["n", "trials", "max_residual", "status"]);
        for n in list::<u64>(m, "n")? {
            if n == 0 {
                return usage("layers start at n = 1");
            }
            let dim = n as usize;
            let mut trials: Vec<Vec<BigRational>> = (0..dim)
                .map(|k| (0..dim).map(|j| rat((j == k) as i64)).collect())
                .collect();
            for _ in 0..random {
                trials.push((0..dim).map(|_| rat(rng.gen_range(-9..=9))).collect());
            }
            let mut worst = BigRational::zero();
            for phi in &trials {
                for x in heisenberg_residual(&alpha, &beta, n, phi)? {
                    let a = if x < BigRational::zero() { -x } else { x };
                    if a > worst {
                        worst = a;
                    }
                }
            }
            let ok = worst.is_zero();
            if !ok {
                r.fail(format!("n={n}: residual {worst}"));
            }
            r.row([n.to_string(), trials.len().to_string(), worst.to_string(), if ok { "exact" } else { "FAIL" }.to_string()]);
        }
        Ok(r)
    }
}

pub struct HahnBasis;

impl Command for HahnBasis {
    fn name(&self) -> &'static str {
        "hahn-basis"
    }

    fn about(&self) -> &'static str {
        "Orthogonal basis on a layer from iterated raising operators"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("alpha", "1", "alpha (rational)"),
            def("beta", "1", "beta (rational)"),
            def("n", "3", "Layer"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        let alpha = rational(m, "alpha")?;
        let beta = rational(m, "beta")?;
        let n: u64 = get(m, "n")?;
        let basis = hahn_basis(&alpha, &beta, n);
        let gs = gram_schmidt_monomials(&alpha, &beta, n)?;
        let tau = real_beta_layer_closed_form(&alpha, &beta, n)?;
        let mut r = Report::new(self.name(), &["m", "values_by_j", "norm", "gram_schmidt"]);
        for (k, phi) in basis.iter().enumerate() {
            for (l, other) in basis.iter().enumerate().take(k) {
                let ip = tau_inner(&tau, phi, other);
                if !ip.is_zero() {
                    r.fail(format!("<phi_{k}, phi_{l}> = {ip}"));
                }
            }
            let ok = proportional(phi, &gs[k]);
            if !ok {
                r.fail(format!("phi_{k} is not proportional to the Gram-Schmidt vector"));
            }
            let cells: Vec<String> = phi.iter().map(|x| x.to_string()).collect();
            r.row([
                k.to_string(),
                cells.join(" "),
                tau_inner(&tau, phi, phi).to_string(),
                if ok { "proportional" } else { "DIFFER" }.to_string(),
            ]);
        }
        Ok(r)
    }
}

fn proportional(a: &[BigRational], b: &[BigRational]) -> bool {
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return a.iter().all(Zero::is_zero);
    };
    let c = &a[k] / &b[k];
    a.iter().zip(b).all(|(x, y)| *x == &c * y)
}

pub struct QZetaCmd;

impl Command for QZetaCmd {
    fn name(&self) -> &'static str {
        "q-zeta"
    }

    fn about(&self) -> &'static str {
        "q-integers, the q-zeta product and its limit to the Euler factor at 2"
    }

    fn args(&self) -> Vec<Arg> {
        vec![
            def("s", "1,2,3", "Arguments s (comma list)"),
            opt("q", "Evaluate zeta_q(s) at this q in (0, 1)"),
            opt("limit", "Evaluate zeta_(2^-N)(s/N) against (1 - 2^-s)^-1 at these N"),
            def("tol", "1e-4", "Tolerance for --limit at the last N"),
            opt("integer", "s,q: the q-integer [s]_q (exact for rational input; q = 1 gives s)"),
            def("max-terms", "100000", "Product truncation"),
        ]
    }

    fn run(&self, m: &ArgMatches) -> CliResult<Report> {
        if has(m, "integer") {
            let (s, q) = super::arith::pair_of(raw(m, "integer")?, "integer")?;
            let s: Value = super::arith::parse(s, "integer")?;
            let q: Value = super::arith::parse(q, "integer")?;
            let v = match q_integer(&s, &q) {
                Ok(v) => v,
                Err(_) => q_integer_total(&s, &q),
            };
            let mut r = Report::new(self.name(), &["value"]);
            r.row([v]);
            return Ok(r);
        }
        let max_terms: usize = get(m, "max-terms")?;
        let ss: Vec<f64> = list(m, "s")?;
        if let Some(q) = get_opt::<f64>(m, "q")? {
            let mut r = Report::new(self.name(), &["s", "q", "value", "terms", "tail_bound"]);
            for s in ss {
                let z = q_zeta(s, q, max_terms)?;
                r.row([s.to_string(), q.to_string(), format!("{:.15e}", z.value), z.terms.to_string(), format!("{:.3e}", z.tail_bound)]);
            }
            return Ok(r);
        }
        if !has(m, "limit") {
            return usage("give --q, --limit or --integer");
        }
        let ns: Vec<u32> = list(m, "limit")?;
        let tol: f64 = get(m, "tol")?;
        let mut r = Report::new(self.name(), &["s", "N", "value", "target", "error"]);
        for &s in &ss {
            let target = 1.0 / (1.0 - 2f64.powf(-s));
            let mut last = f64::INFINITY;
            for &n in &ns {
                let nf = n as f64;
                let z = q_zeta(s / nf, 2f64.powf(-nf), max_terms)?;
                last = (z.value - target).abs();
                r.row([s.to_string(), n.to_string(), format!("{:.15e}", z.value), format!("{target:.15e}"), format!("{last:.3e}")]);
            }
            if !(last < tol) {
                r.fail(format!("s={s}: error {last:.3e} at N={} exceeds {tol:.1e}", ns.last().copied().unwrap_or(0)));
            }
        }
        Ok(r)
    }
}
