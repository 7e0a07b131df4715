use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-interp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zeta_neg_one() {
    let o = run(&["zeta-neg", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1/12\n");
}

#[test]
fn kummer_example_passes() {
    let o = run(&["kummer", "--p", "5", "--i", "2", "--j", "6", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.split_whitespace().eq(["2", "6", "0", "5", "1", "1", "pass"]), "{row}");
}

#[test]
fn spq_sweep_excludes_everything() {
    let o = run(&["spq-sweep", "--p", "3", "--q", "5", "--jmax", "50", "--depth", "12", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    let expected = (2..=50u64).filter(|j| j % 3 != 0 && j % 5 != 0).count();
    assert_eq!(rows.len(), expected);
    assert!(rows.iter().all(|r| r.contains(",excluded,")));
}

#[test]
fn csv_has_schema_line() {
    let o = run(&["bernoulli", "--max", "4", "--format", "csv"]);
    assert!(stdout(&o).starts_with("# schema=1\nk,b_k,tangent_route\n"));
}

#[test]
fn json_output_parses() {
    let o = run(&["moments", "--m", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verified"], true);
    assert_eq!(v["rows"][1]["series_slot"], "1/4");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["heisenberg", "--random", "4", "--seed", "7"][..],
        &["spq-sweep", "--p", "5", "--q", "7", "--jmax", "30", "--probe"],
        &["chain-limits", "--format", "json"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["zeta-neg", "--m", "one"]).status.code(), Some(2));
    assert_eq!(run(&["zeta-neg", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(run(&["zeta-neg"]).status.code(), Some(2));
    assert_eq!(run(&["bernoulli", "--k", "2", "--format", "xml"]).status.code(), Some(2));
    let o = run(&["gamma-p", "--p", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd prime"));
    assert_eq!(run(&["kl-branch", "--s0", "0", "--t", "0"]).status.code(), Some(2));
    assert_eq!(run(&["kummer", "--p", "5", "--i", "4", "--j", "8"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one_with_counterexample() {
    let o = run(&["gamma-continuity", "--unrestricted"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["pq-hurwitz", "--help"]).status.code(), Some(0));
}

#[test]
fn padic_examples() {
    let o = run(&["padic", "--p", "5", "--x", "1/3", "--prec", "3", "--format", "csv"]);
    assert!(stdout(&o).contains("\"(0, 42, 3)_5\""));
    let o = run(&["teichmuller", "--p", "3", "--q", "5", "--crt", "2,3", "--prec", "2", "--l", "2"]);
    assert_eq!(stdout(&o), "128\n");
}

#[test]
fn mahler_text_round_trips_through_eval() {
    let o = run(&["mahler-coeffs", "--function", "char:2,1", "--p", "3", "--l", "17", "--text"]);
    let dir = std::env::temp_dir().join(format!("padic-interp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("series.txt");
    std::fs::write(&path, stdout(&o)).unwrap();
    let e = run(&["mahler-eval", "--series", path.to_str().unwrap(), "--x", "5", "--format", "csv"]);
    assert_eq!(e.status.code(), Some(0), "{}", String::from_utf8_lossy(&e.stderr));
    let out = stdout(&e);
    let row = out.lines().nth(2).unwrap();
    assert!(row.contains(",1 + O(3^"), "{row}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn expected_counterexamples_are_reported() {
    assert_eq!(run(&["open-set-measure", "--a", "2", "--p", "5", "--n", "1"]).status.code(), Some(1));
    assert_eq!(run(&["open-set-measure", "--closed-form", "hurwitz"]).status.code(), Some(0));
    assert_eq!(run(&["chain-limits", "--target", "real"]).status.code(), Some(1));
    assert_eq!(run(&["chain-limits", "--target", "padic"]).status.code(), Some(0));
}
