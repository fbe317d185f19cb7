use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn ctlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctlab")).args(args).env_remove("CTLAB_BUDGET_NODES").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_with_embedded_signature() {
    let o = ctlab(&["check", "--team", &data("exct.json"), "--formula", "(X=1) []-> Y=2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "formula=(X=1) []-> Y=2 verdict=true\n");
    let o = ctlab(&["check", "--team", &data("exct.json"), "--formula", "X=1", "--formula", "dep(Y;Z)"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("formula=X=1 verdict=false"));
}

#[test]
fn constancy_holds_on_the_empty_team() {
    let o = ctlab(&["check", "--team", &data("empty_team.json"), "--formula", "con(X)"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn interventions_match_the_frozen_outputs() {
    for (team, sig, iv, want) in [
        ("example_team.json", "example_sig.json", "X=1", "example_team_do_x1.json"),
        ("gct_team.json", "gct_sig.json", "Y=1", "gct_team_do_y1.json"),
    ] {
        let o = ctlab(&["intervene", "--team", &data(team), "--sig", &data(sig), "--do", iv]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), std::fs::read_to_string(data(want)).unwrap(), "{team}");
    }
}

#[test]
fn entailment_failure_prints_a_counterexample() {
    let o = ctlab(&["entail", "--sig", &data("binary_x_sig.json"), "--semantics", "c", "--gamma", "con(X)", "--phi", "X=1"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("verdict=false\ncounterexample={"), "{out}");
    let o = ctlab(&["entail", "--sig", &data("binary_x_sig.json"), "--semantics", "g", "--gamma", "X=1", "--phi", "con(X)"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn error_exit_codes() {
    let o = ctlab(&["check", "--team", &data("missing.json"), "--formula", "X=1"]);
    assert_eq!(code(&o), 2);
    let o = ctlab(&["check", "--team", &data("exct.json"), "--formula", "X=="]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_ctlab"))
        .args(["emit", "chi", "--sig", &data("example_sig.json")])
        .env("CTLAB_BUDGET_NODES", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn emit_is_deterministic() {
    let args = ["emit", "leadsto", "--sig", &data("example_sig.json"), "--x", "X", "--y", "Y"];
    let a = ctlab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&ctlab(&args)));
    assert!(stdout(&a).starts_with("builder=leadsto\n"));
    let o = ctlab(&["emit", "phi", "--team", &data("exct.json")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn synthesize_then_verify() {
    for target in ["co", "cod"] {
        let o = ctlab(&["synthesize", "--sig", &data("binary_x_sig.json"), "--class", &data("class_x0.json"), "--target", target]);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        let f = out.lines().find_map(|l| l.strip_prefix("formula=")).unwrap();
        let v = ctlab(&["verify", "--sig", &data("binary_x_sig.json"), "--class", &data("class_x0.json"), "--formula", f]);
        assert_eq!(stdout(&v), "defines=true\n");
    }
    let v = ctlab(&["verify", "--sig", &data("binary_x_sig.json"), "--class", &data("class_x0.json"), "--formula", "con(X)"]);
    assert_eq!(code(&v), 1);
}

#[test]
fn stored_derivations_check() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", "derivations"].iter().collect();
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let o = ctlab(&["proof", "check", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}: {}", p.display(), stdout(&o));
        n += 1;
    }
    assert!(n >= 15);
    let o = ctlab(&["proof", "check", &data("derivations/global_or_commutes.json"), "--system", "co-g"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("valid=false\npath=/\n"));
}

#[test]
fn fuzz_rule_reports_no_violations() {
    let o = ctlab(&["fuzz-rule", "--rule", "boxright-Eff", "--system", "co-g", "--sig", &data("binary_x_sig.json"), "--trials", "30"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "rule=boxright-Eff system=co-g trials=30 applicable=30 violations=0\n");
}
