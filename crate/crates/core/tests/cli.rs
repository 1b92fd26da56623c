use std::{
  path::PathBuf,
  process::{Command, Output},
};

use serde_json::{json, Value};

fn numa(args: &[&str]) -> Output { Command::new(env!("CARGO_BIN_EXE_numa")).args(args).output().expect("binary runs") }

fn report(args: &[&str]) -> Value {
  let out = numa(args);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
  serde_json::from_slice(&out.stdout).expect("json report")
}

fn fixture(name: &str, body: &str) -> PathBuf {
  let dir = std::env::temp_dir().join(format!("numa-cli-{}", std::process::id()));
  std::fs::create_dir_all(&dir).unwrap();
  let path = dir.join(name);
  std::fs::write(&path, body).unwrap();
  path
}

#[test]
fn kz1_cohomology_table() {
  let v = report(&["kz1-cohomology", "--nmax", "4", "--dmax", "6"]);
  assert_eq!(v["results"]["totals"], json!(["Z", "Z", "0", "0"]));
  assert_eq!(v["cutoffs"]["d_max"], json!(6));
  assert!(v["verdicts"].as_object().unwrap().values().all(|x| *x == json!(true)));
}

#[test]
fn cocycle_dichotomy() {
  let v = report(&["cocycle-solve", "--p", "3", "--basis", "poly"]);
  assert_eq!(v["results"]["report"]["outcome"]["outcome"], json!("no_solution"));
  assert_eq!(v["verdicts"]["verified"], json!(true));
  let v = report(&["cocycle-solve", "--p", "3", "--basis", "binom"]);
  assert_eq!(v["verdicts"]["witness_found"], json!(true));
}

#[test]
fn homology_and_snf_from_files() {
  let c = fixture("times_two.json", r#"{"ranks": {"0": 1, "1": 1}, "diff": {"1": [[2]]}}"#);
  let v = report(&["homology", c.to_str().unwrap()]);
  assert_eq!(v["results"]["homology"]["0"]["group"], json!("Z/2"));
  assert_eq!(v["results"]["homology"]["1"]["group"], json!("0"));

  let m = fixture("m.json", "[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]");
  let v = report(&["snf", m.to_str().unwrap()]);
  assert_eq!(v["results"]["invariant_factors"], json!(["2", "6", "12"]));
  assert!(v["verdicts"].as_object().unwrap().values().all(|x| *x == json!(true)));
}

#[test]
fn certify_and_mahler() {
  let f = fixture("cube.json", r#"{"nvars": 1, "terms": [{"idx": [3], "c": "2"}, {"idx": [1], "c": "-7"}]}"#);
  let v = report(&["certify", "--p", "5", f.to_str().unwrap(), "--samples", "100"]);
  assert_eq!(v["verdicts"]["p_integral"], json!(true));

  let v = report(&["mahler", "--p", "2", "--fn", "3^x", "--kmax", "32"]);
  let entries = v["results"]["entries"].as_array().unwrap();
  assert_eq!(entries.len(), 33);
  assert_eq!(entries[32]["coefficient"], json!(4294967296i64));
  assert_eq!(entries[32]["valuation"], json!(32));
}

#[test]
fn lens_and_groups() {
  let v = report(&["lens-orbits", "7"]);
  assert_eq!(v["results"]["homotopy_classes"].as_array().unwrap().len(), 1);
  assert_eq!(v["results"]["isomorphism_classes"].as_array().unwrap().len(), 3);

  let v = report(&["passi", "--group", "heisenberg", "--fn", r#"{"nvars": 3, "terms": [{"idx": [0, 1, 0], "c": "1"}]}"#]);
  assert_eq!(v["results"]["passi_degree"], json!(2));
  assert!(v["verdicts"].as_object().unwrap().values().all(|x| *x == json!(true)));

  let v = report(&["power", "--group", "u3", "--g", "1,1,0", "--r", "5/3"]);
  assert_eq!(v["results"]["power"], json!(["5/3", "5/3", "5/9"]));
}

#[test]
fn exit_codes_and_determinism() {
  assert_eq!(numa(&["snf"]).status.code(), Some(2));
  assert_eq!(numa(&["snf", "/nonexistent/matrix.json"]).status.code(), Some(2));
  assert_eq!(numa(&["struct", "q", "1", "2"]).status.code(), Some(2));
  let out = numa(&["power", "--group", "u3", "--g", "1,1,0", "--r", "1/2", "--padic", "2:4"]);
  assert_eq!(out.status.code(), Some(1));
  let err: Value = serde_json::from_slice(&out.stdout).unwrap();
  assert_eq!(err["error"]["kind"], json!("InvalidInput"));

  let a = numa(&["struct", "g", "2", "3", "--output", "text"]);
  let b = numa(&["struct", "g", "2", "3", "--output", "text"]);
  assert_eq!(a.stdout, b.stdout);
  assert!(String::from_utf8(a.stdout).unwrap().contains("coefficients:"));
}
