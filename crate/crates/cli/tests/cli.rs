use std::path::PathBuf;
use std::process::{Command, Output};

fn jobs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn qhodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhodge")).args(args).output().expect("binary runs")
}

fn job(name: &str) -> String {
    jobs().join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("qhodge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cusp_hodge0_is_deterministic() {
    let a = qhodge(&["hodge0", &job("cusp.job"), "--format", "json"]);
    let b = qhodge(&["hodge0", &job("cusp.job"), "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["hodge0.ideal"], serde_json::json!(["1*x^1", "1*y^1"]));
    assert_eq!(doc["newton.one_plus_alpha_minus_eps"], doc["hodge0.ideal"]);
    assert_eq!(doc["beta"], "s + 1/6");
    assert_eq!(doc["assertion.parametrically_prime"], "asserted");
}

#[test]
fn cusp_full_job() {
    let o = qhodge(&["hodge", &job("cusp.job")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("bs.b: s^3 + 3*s^2 + 107/36*s + 35/36"));
    assert!(text.contains("hodge.k1.cross_route: gamma, shifted gamma and V^0 routes agree"));
}

#[test]
fn smooth_half_reports_both_candidates() {
    let o = qhodge(&["hodge0", &job("x-half.job"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["hodge0.ideal"], serde_json::json!(["1*x^1"]));
    assert_eq!(doc["newton.alpha_minus_eps"], serde_json::json!(["1"]));
    assert_eq!(doc["newton.one_plus_alpha_minus_eps"], serde_json::json!(["1*x^1"]));
}

#[test]
fn quadric_window_failure() {
    let o = qhodge(&["hodge", &job("quadric4.job")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("hypothesis.window: fail (roots -2)"));
    assert_eq!(qhodge(&["check", &job("quadric4.job")]).status.code(), Some(2));
}

#[test]
fn quadric_generation_witness() {
    let o = qhodge(&["verify", &job("quadric4.job"), "--selector", "generation", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify.generation: fail (witness: root -2"));
    // a selector that presupposes the window refuses to run
    let o = qhodge(&["verify", &job("quadric4.job"), "--selector", "fv-compat"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_and_config_errors() {
    let bad = scratch("bad.job", "vars: x\nf: x^-1\n");
    let o = qhodge(&["bs", &bad]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 1"));
    let unknown = scratch("unknown.job", "vars: x\nf: x + y\n");
    assert_eq!(qhodge(&["bs", &unknown]).status.code(), Some(4));
    assert_eq!(qhodge(&["verify", &job("cusp.job"), "--selector", "nope"]).status.code(), Some(4));
    assert_eq!(qhodge(&["bs", "/nonexistent/job"]).status.code(), Some(4));
    assert_eq!(qhodge(&["multiplier", &job("cusp.job"), "--c", "-1"]).status.code(), Some(4));
}

#[test]
fn missing_assertion_is_a_hypothesis_error() {
    let j = scratch("noassert.job", "vars: x, y\nf: x^2 + y^3\nk_max: 1\n");
    assert_eq!(qhodge(&["hodge", &j]).status.code(), Some(2));
    assert_eq!(qhodge(&["hodge0", &j]).status.code(), Some(0));
    assert_eq!(qhodge(&["hodge", &j, "--k", "0"]).status.code(), Some(0));
}

#[test]
fn tiny_budget_is_inconclusive() {
    let j = scratch("tiny.job", "vars: x, y\nf: x^2 + y^3\nbudget_e: 0\n");
    let o = qhodge(&["hodge0", &j]);
    assert_eq!(o.status.code(), Some(3));
    // scaling the budget does not help a zero dt-order
    assert_eq!(qhodge(&["hodge0", &j, "--budget-scale", "2"]).status.code(), Some(3));
    let j = scratch("small.job", "vars: x, y\nf: x^2 + y^3\nbudget_e: 1\nbudget_m: 2\n");
    assert_eq!(qhodge(&["hodge0", &j, "--budget-scale", "3"]).status.code(), Some(0));
}

#[test]
fn multiplier_thresholds() {
    let o = qhodge(&["multiplier", &job("cusp.job"), "--c", "5/6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["multiplier"], serde_json::json!(["1*x^1", "1*y^1"]));
    assert_eq!(doc["multiplier.left_limit"], serde_json::json!(["1"]));
}

#[test]
fn bs_and_ann() {
    let o = qhodge(&["bs", &job("node.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bs.b: s^2 + 2*s + 1"));
    let o = qhodge(&["ann", &job("cusp.job")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ann.sharp_symbols:"));
}
