use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rtl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtl")).args(args).env_remove("RTL_SEED").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rtl-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, content).unwrap();
    p
}

fn find_bound<'a>(report: &'a Value, theorem: &str) -> &'a Value {
    report["bounds"].as_array().unwrap().iter().find(|b| b["theorem"] == theorem).expect("bound present")
}

#[test]
fn spin_x_reports_reference_bound() {
    let o = rtl(&["scenario", "spin-x", "--hbar-omega", "1", "--eps", "0.01"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(find_bound(&v, "proj-meas")["value"].as_f64(), Some(10.5));
}

#[test]
fn gibbs_diverging_passes() {
    let o = rtl(&["scenario", "gibbs-diverging", "--e1", "1", "--e2", "2", "--beta", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn unknown_ids_exit_2() {
    assert_eq!(code(&rtl(&["scenario", "no-such-thing"])), 2);
    assert_eq!(code(&rtl(&["sweep", "no-such-thing"])), 2);
    assert_eq!(code(&rtl(&["bound", "no-such-bound"])), 2);
}

#[test]
fn foreign_flag_is_rejected() {
    let o = rtl(&["scenario", "spin-x", "--e1", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--e1"));
}

#[test]
fn log_sweep_has_requested_rows() {
    let o = rtl(&["sweep", "spin-x", "--from", "1e-3", "--to", "1e-1", "--points", "20", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 20);
    let eps: Vec<f64> = rows.iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(eps.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((eps[0], eps[19]), (1e-3, 1e-1));
    // bound * eps approaches 1/8 from below as eps shrinks.
    let b0: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    assert!((b0 * eps[0] - 0.125).abs() < 0.01);
}

#[test]
fn two_point_grid() {
    let o = rtl(&["sweep", "hadamard", "--from", "0.01", "--to", "0.2", "--points", "2", "--spacing", "linear"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["sweep"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn divergent_sweep_at_zero_is_rejected() {
    let o = rtl(&["sweep", "rni-coherence", "--from", "0", "--to", "0.1", "--points", "3", "--spacing", "linear"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverges"));
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_grids_are_rejected() {
    assert_eq!(code(&rtl(&["sweep", "spin-x", "--from", "0.1", "--to", "0.01"])), 2);
    assert_eq!(code(&rtl(&["sweep", "spin-x", "--points", "1"])), 2);
    assert_eq!(code(&rtl(&["sweep", "qfi-divergence"])), 2);
}

#[test]
fn measure_t_state_magic() {
    let (c, s) = ((std::f64::consts::PI / 4.0).cos() / 2.0, (std::f64::consts::PI / 4.0).sin() / 2.0);
    let state = scratch("t.json", &format!(r#"{{"dims":[2],"matrix":[[[0.5,0],[{c},{}]],[[{c},{s}],[0.5,0]]]}}"#, -s));
    let theory = scratch("magic.json", r#"{"kind":"magic","dims":[2]}"#);
    let o = rtl(&["measure", "--state", state.to_str().unwrap(), "--theory", theory.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let want = (4.0 - 2.0 * std::f64::consts::SQRT_2).log2();
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-6);
    assert_eq!(v["constants"]["a"], "inf");
}

#[test]
fn gibbs_state_has_no_athermality() {
    let beta: f64 = 1.3;
    let z = 1.0 + (-beta).exp();
    let (p0, p1) = (1.0 / z, (-beta).exp() / z);
    let state = scratch("tau.json", &format!(r#"{{"dims":[2],"matrix":[[[{p0},0],[0,0]],[[0,0],[{p1},0]]]}}"#));
    let theory = scratch(
        "ath.json",
        &format!(r#"{{"kind":"athermality","beta":{beta},"hamiltonian":{{"dims":[2],"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}}}}"#),
    );
    let o = rtl(&["measure", "--state", state.to_str().unwrap(), "--theory", theory.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let value: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(value.abs() < 1e-12);
}

#[test]
fn malformed_json_exits_2_with_diagnostic() {
    let bad = scratch("bad.json", "{\"dims\": [2], \"matrix\": ");
    let theory = scratch("coh.json", r#"{"kind":"coherence","dims":[2]}"#);
    let o = rtl(&["measure", "--state", bad.to_str().unwrap(), "--theory", theory.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("malformed state") && err.contains("line 1"), "{err}");
    let missing = rtl(&["measure", "--state", "/nonexistent/x.json", "--theory", theory.to_str().unwrap()]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn bound_from_flags_and_file() {
    let o = rtl(&["bound", "proj-meas", "--set", "commutator_norm=0.5", "--set", "spread_in=1", "--eps", "0.01"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"].as_f64(), Some(10.5));
    let input = scratch("in.json", r#"{"commutator_norm": 0.5, "spread_in": 1.0, "epsilon": 0.0}"#);
    let o = rtl(&["bound", "proj-meas", "--input", input.to_str().unwrap()]);
    assert_eq!(json(&o)["value"], "divergent");
    assert_eq!(code(&rtl(&["bound", "general", "--set", "nonsense=1"])), 2);
    let unknown_field = scratch("in2.json", r#"{"nonsense": 1.0}"#);
    assert_eq!(code(&rtl(&["bound", "general", "--input", unknown_field.to_str().unwrap()])), 2);
}

#[test]
fn selftest_reduced_budget_passes_and_negated_tolerance_fails() {
    assert_eq!(code(&rtl(&["selftest", "--budget", "0.02"])), 0);
    assert_eq!(code(&rtl(&["selftest", "--budget", "0.02", "--tolerance-scale", "-1"])), 1);
    assert_eq!(code(&rtl(&["selftest", "--budget", "0"])), 2);
}

#[test]
fn output_is_deterministic_and_file_matches_stdout() {
    let a = rtl(&["scenario", "rni-energy", "--seed", "3"]);
    let b = rtl(&["scenario", "rni-energy", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let out = std::env::temp_dir().join(format!("rtl-cli-out-{}.json", std::process::id()));
    let c = rtl(&["scenario", "rni-energy", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn seed_comes_from_environment() {
    let flag = rtl(&["scenario", "rni-energy", "--seed", "9"]);
    let env = Command::new(env!("CARGO_BIN_EXE_rtl"))
        .args(["scenario", "rni-energy"])
        .env("RTL_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn scenario_csv_lists_checks() {
    let o = rtl(&["scenario", "rni-coherence", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("check,value,relation,target,tolerance,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn list_names_every_scenario() {
    let v = json(&rtl(&["list"]));
    for id in ["spin-x", "gibbs-diverging", "rni-magic", "way", "qfi-divergence"] {
        assert!(v["scenarios"].get(id).is_some(), "{id}");
    }
    assert_eq!(v["bounds"].as_array().unwrap().len(), 13);
}
