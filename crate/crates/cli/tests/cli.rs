use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn stabrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabrw"))
        .args(args)
        .env("STABRW_FIXTURES", fixtures())
        .current_dir(std::env::temp_dir())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("stabrw-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn equiv_verdicts_and_exit_codes() {
    let o = stabrw(&["equiv", "teleport.circ", "id1.circ"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "proportional"));

    let o = stabrw(&["equiv", "mbqc_cnot.circ", "cnot.circ", "--oracle", "both"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "proportional"));

    let o = stabrw(&["equiv", "cnot.circ", "swap.circ"]);
    assert_eq!((code(&o), stdout(&o).trim()), (2, "different"));

    let o = stabrw(&["--oracle", "tableau", "equiv", "cnot.circ", "swap.circ"]);
    assert_eq!((code(&o), stdout(&o).trim()), (2, "different"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&stabrw(&["equiv", "missing.circ", "id1.circ"])), 1);
    assert_eq!(code(&stabrw(&["equiv", "id1.circ", "cnot.circ"])), 1);
    let bad = scratch("bad.circ", "input a\nfrobnicate a\noutput a\n");
    assert_eq!(code(&stabrw(&["translate", &bad])), 1);
    let schema = scratch("schema.deriv", r#"{"kind": "circuit", "initial": "input a; output a"}"#);
    assert_eq!(code(&stabrw(&["verify", &schema])), 1);
}

#[test]
fn verify_reports_each_step() {
    let o = stabrw(&["verify", "teleport.deriv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.contains(" OK ")).count(), 13);
    assert!(out.trim_end().ends_with("accepted"));

    let o = stabrw(&["verify", "teleport_bad.deriv"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("rejected at step 4"), "{}", stdout(&o));

    let o = stabrw(&["verify", "s1_from_assoc.zxderiv"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn structured_verify_is_json() {
    let o = stabrw(&["--format", "structured", "verify", "teleport_bad.deriv"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"]["verdict"], "rejected");
    assert_eq!(v["outcome"]["step"], 4);
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn apply_rewrites_at_an_anchor() {
    let h = scratch("h.circ", "input a\nh a\noutput a\n");
    let o = stabrw(&["apply", &h, "--rule", "Hcirc", "--match", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "input a\nrz a 1\nrx a 1\nrz a 1\noutput a\n");

    let rz = scratch("rz.circ", "input a\nrz a 1\nrz a 1\noutput a\n");
    let o = stabrw(&["apply", &rz, "--rule", "S6circ", "--param", "alpha=1", "--param", "beta=1"]);
    assert_eq!(stdout(&o), "input a\nrz a 2\noutput a\n");
    let o = stabrw(&["apply", &rz, "--rule", "S6circ", "--param", "alpha=1", "--param", "beta=1", "--binding", r#"{"gates":[0,1]}"#]);
    assert_eq!(stdout(&o), "input a\nrz a 2\noutput a\n");

    assert_eq!(code(&stabrw(&["apply", "cnot.circ", "--rule", "Hcirc"])), 2);
    assert_eq!(code(&stabrw(&["apply", "cnot.circ", "--rule", "NoSuchRule"])), 1);
}

#[test]
fn apply_lists_matches() {
    let hh = scratch("hh.circ", "input a b\nh a\nh b\noutput a b\n");
    let o = stabrw(&["apply", &hh, "--rule", "Hcirc", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0: {\"gates\":[0]}\n1: {\"gates\":[1]}\n");
}

#[test]
fn translate_prints_zx_text() {
    let o = stabrw(&["translate", "cnot.circ"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with(" Z") || l.ends_with(" X")).count(), 2);

    let o = stabrw(&["translate", "id1.circ"]);
    assert_eq!(stdout(&o), "node 0 in 0\nnode 1 out 0\nedge 0 1\n");
}

#[test]
fn selftest_passes_and_shrinks_with_the_bounds() {
    let full = stabrw(&["selftest"]);
    assert_eq!(code(&full), 0);
    let last = stdout(&full).lines().last().unwrap().to_string();
    assert!(last.ends_with("rules checked, 0 failures"), "{last}");

    let small = stabrw(&["selftest", "--max-arity", "2", "--format", "structured"]);
    assert_eq!(code(&small), 0);
    let v: serde_json::Value = serde_json::from_slice(&small.stdout).unwrap();
    let n_full: usize = last.split_whitespace().next().unwrap().parse().unwrap();
    assert!(v["total"].as_u64().unwrap() < n_full as u64);
    assert_eq!(v["failures"], 0);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&stabrw(&["selftest", "--max-arity", "0"])), 1);
    assert_eq!(code(&stabrw(&["--oracle", "psychic", "equiv", "cnot.circ", "cnot.circ"])), 1);
    assert_eq!(code(&stabrw(&["--help"])), 0);
}
