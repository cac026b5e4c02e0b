use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn rigfol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigfol")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = rigfol(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_of_failure(args: &[&str]) -> String {
    let out = rigfol(args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_spec(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

/// Row-major `(n+1)²` entries of `diag(w)`.
fn diag(w: &[i64]) -> Vec<i64> {
    let s = w.len();
    let mut m = vec![0; s * s];
    for (i, x) in w.iter().enumerate() {
        m[i * s + i] = *x;
    }
    m
}

// h = diag(1, -1, 0) and e = E_01 span a closed plane in sl(3).
fn plane_spec() -> Value {
    let mut e = vec![0; 9];
    e[1] = 1;
    json!({ "n": 2, "generators": [diag(&[1, -1, 0]), e] })
}

#[test]
fn infinito_five_loads_from_builtin() {
    let v = ok_json(&["omega", "--builtin", "infinito", "-p", "n=5", "--json"]);
    assert_eq!(v["n"], 5);
    assert_eq!(v["q"], 1);
    assert_eq!(v["degree"], 4);
}

#[test]
fn hand_written_diagonal_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let w = [[1, 0, -3, 2], [2, -1, 0, -1]];
    let spec = write_spec(dir.path(), "diag.json", &json!({ "n": 3, "generators": [diag(&w[0]), diag(&w[1])] }));
    let from_file = ok_json(&["omega", "--spec", &spec, "--json"]);
    let weights = serde_json::to_string(&w).unwrap();
    let builtin = ok_json(&["omega", "--builtin", "diagonal", "-p", "n=3", "-p", "q=1", "-p", &format!("weights={weights}"), "--json"]);
    assert_eq!(from_file["omega"], builtin["omega"]);
    assert_eq!(from_file["degree"], builtin["degree"]);
}

#[test]
fn valid_plane_spec_loads() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "plane.json", &plane_spec());
    let h = ok_json(&["cohomology", "--spec", &spec, "--complement", "standard", "--json"]);
    assert_eq!(h["degree"], 1);
}

#[test]
fn perturbed_spec_names_the_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = plane_spec();
    // e = E_01 + E_12: [h, e] picks up E_12 with the wrong weight
    v["generators"][1][5] = json!(1);
    let spec = write_spec(dir.path(), "bad.json", &v);
    let err = stderr_of_failure(&["omega", "--spec", &spec]);
    assert!(err.contains("[g0, g1] is not in the span"), "{err}");
}

#[test]
fn spec_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "trace.json", &json!({ "n": 2, "generators": [diag(&[1, 1, 0])] }));
    assert!(stderr_of_failure(&["omega", "--spec", &spec]).contains("nonzero trace"));

    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{ \"n\": 2, ").unwrap();
    assert!(stderr_of_failure(&["omega", "--spec", p.to_str().unwrap()]).contains("malformed JSON"));

    assert!(stderr_of_failure(&["pipeline", "--builtin", "nope"]).contains("unknown builtin"));
    assert!(stderr_of_failure(&["omega"]).contains("--builtin"));
}

#[test]
fn pipeline_json_is_byte_stable() {
    let args = ["pipeline", "--builtin", "infinito", "-p", "n=4", "--seed", "7", "--json"];
    let a = rigfol(&args);
    let b = rigfol(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdict"], "rigid");
    assert_eq!(v["codim"]["split_hypothesis"]["seed"], 7);
    assert!(v.get("timing_ms").is_none());

    let timed = ok_json(&["pipeline", "--builtin", "infinito", "-p", "n=3", "--timing", "--json"]);
    assert!(timed["timing_ms"]["cohomology"].is_u64());
}

#[test]
fn negative_verdict_is_data() {
    let v = ok_json(&["pipeline", "--builtin", "sl2_sym", "-p", "r=4", "--json"]);
    assert_eq!(v["verdict"], "not-certified");
    assert_eq!(v["codim"]["split_hypothesis"]["verdict"], "refuted");
}

#[test]
fn stages_rerun_from_dumped_forms() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok_json(&["omega", "--builtin", "infinito", "-p", "n=4", "--dump-dir", d, "--json"]);
    let form = dir.path().join("infinito_n_4_.omega.form");
    let form = form.to_str().unwrap();

    let direct = ok_json(&["singdim", "--builtin", "infinito", "-p", "n=4", "--json"]);
    let replay = ok_json(&["singdim", "--form", form, "--json"]);
    assert_eq!(direct, replay);

    let check = ok_json(&["check", "--form", form, "--json"]);
    assert_eq!(check["descends"], true);
    assert_eq!(check["pluecker"], "Pass");
    assert_eq!(check["integrable"], "Pass");
}

#[test]
fn primes_and_trials_reach_the_certificate() {
    let v = ok_json(&["singdim", "--builtin", "infinito", "-p", "n=3", "--primes", "211,223,227", "--trials", "3", "--json"]);
    assert_eq!(v["omega_geq2"]["primes"], json!([211, 223, 227]));
    assert_eq!(v["omega_geq2"]["trials"], 3);
}

#[test]
fn extend_six() {
    let v = ok_json(&["extend", "--n", "6", "--json"]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["values"], json!(["9/8", "-3/2"]));
    assert_eq!(sols[0]["closed"], true);
}

#[test]
fn table1_runs() {
    let v = ok_json(&["table1", "--json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        let id = r["algebra"].as_str().unwrap();
        let want = if id.starts_with("pullback") { "checks-only" } else { "rigid" };
        assert_eq!(r["verdict"], want, "{id}");
    }
    let g7 = rows.iter().find(|r| r["algebra"] == "g7").unwrap();
    assert_eq!(g7["codim"]["split_hypothesis"]["primes"], json!([107, 109]));
}
