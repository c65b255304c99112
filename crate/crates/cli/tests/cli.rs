use std::process::Command;

use serde_json::Value;
use skewinv_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, Value, String) {
    let out = run(std::iter::once("skewinv").chain(args.iter().copied()));
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v, out.stderr)
}

#[test]
fn sigma_of_single_matrix() {
    let (code, r, _) = call(&["sigma", "--n", "3", "--t", "2", "--word", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["payload"]["invariant"]["polynomial"], "x_12(1)^2 + x_13(1)^2 + x_23(1)^2");
    assert_eq!(r["status"], "pass");
}

#[test]
fn hsp_case_a_two_matrices() {
    let (code, r, _) = call(&["hsp", "--case", "A", "--d", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["payload"]["count"]["actual"], 3);
    assert_eq!(r["payload"]["independence"]["rank"], 3);
}

#[test]
fn canon_checks_sigma() {
    let (code, r, _) = call(&["canon", "--blocks", "K3;0:1", "--check-sigma"]);
    assert_eq!(code, EXIT_PASS);
    let sig = r["payload"]["sigma"].as_array().unwrap();
    assert_eq!(sig.len(), 4);
    assert!(sig.iter().all(|s| s["value"] == "0/1"));
}

#[test]
fn non_nilpotent_block_fails_sigma_check() {
    let (code, r, _) = call(&["canon", "--blocks", "K4:mu=1", "--check-sigma"]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(r["status"], "fail");
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [&["bogus"][..], &["sigma", "--n", "3", "--t", "2"], &["hsp", "--case", "E"], &["report"]] {
        let (code, r, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert_eq!(r["status"], "error");
    }
}

#[test]
fn case_a_with_one_matrix_is_rejected() {
    let (code, _, err) = call(&["hsp", "--case", "A", "--d", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("d = 1"));
}

#[test]
fn bad_prime_is_rejected() {
    let (code, _, _) = call(&["mingens", "--n", "3", "--d", "2", "--maxdeg", "4", "--backend", "modular", "--prime", "9"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn payload_is_deterministic() {
    let args = ["mingens", "--n", "3", "--d", "2", "--maxdeg", "4", "--seed", "7"];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["seed"], 7);
}

#[test]
fn csv_only_for_generator_tables() {
    let out = run(["skewinv", "mingens", "--n", "3", "--d", "2", "--maxdeg", "4", "--format", "csv"]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.starts_with("mdeg,dimension,decomposable_dimension,new_generators"));
    let (code, _, _) = call(&["sigma", "--n", "3", "--t", "2", "--word", "1", "--format", "csv"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn modular_and_exact_generators_agree() {
    let base = ["mingens", "--n", "3", "--d", "2", "--maxdeg", "5"];
    let (_, e, _) = call(&base);
    let mut m = base.to_vec();
    m.extend(["--backend", "modular"]);
    let (_, r, _) = call(&m);
    assert_eq!(e["payload"]["profile"], r["payload"]["profile"]);
}

#[test]
fn eval_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"matrices":[{"n":4,"upper":["1","2","0","3","1/2","1+i"]},{"n":4,"upper":["0","1","-1","2","5","-i"]}]}"#,
    )
    .unwrap();
    let (code, r, _) = call(&["eval", "--matrices", path.to_str().unwrap(), "--t", "2", "--word", "1,2,2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["payload"]["agree"], true);
    assert_eq!(r["payload"]["by_products"], r["payload"]["by_substitution"]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(["skewinv", "trace", "--n", "4", "--word", "2,1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), out.stdout);
}

#[test]
fn certificates_for_case() {
    let (code, r, _) = call(&["certificate", "--case", "C"]);
    assert_eq!(code, EXIT_PASS);
    let names: Vec<&str> =
        r["payload"]["certificates"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["N4_Q1", "N4_Q2", "N4_ABC_Q1", "N4_ABC_Q2"]);
}

#[test]
fn generation_for_n3() {
    let (code, r, _) = call(&["generation", "--n", "3", "--d", "2", "--maxdeg", "6"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["payload"]["check"]["generates"], true);
    let (code, _, _) = call(&["generation", "--n", "4", "--d", "2"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn reports_carry_discrepancy_notes() {
    let (_, r, _) = call(&["identities"]);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["notes"].as_array().unwrap().len(), 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_skewinv");
    let ok = Command::new(bin).args(["trace", "--n", "3", "--word", "1,2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
    let bad = Command::new(bin).args(["trace", "--n"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(!bad.stdout.is_empty());
}
