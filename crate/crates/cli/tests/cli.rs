use std::process::Command;

use pdcalc_cli::targets::Targets;
use pdcalc_cli::{run, run_with_targets};
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["pdcalc", "--json"];
    full.extend(args);
    let out = run(full);
    assert!(out.code != 2, "usage error: {}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).expect("valid json"))
}

fn only_check(doc: &Value) -> &Value {
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    &checks[0]
}

#[test]
fn gabber_passes() {
    let (code, doc) = json(&["witt", "gabber", "-p", "3", "-L", "5"]);
    assert_eq!(code, 0);
    assert_eq!(only_check(&doc)["status"], "pass");
    assert_eq!(doc["config"]["witt_length"], 5);
}

#[test]
fn even_prime_failure_is_the_expected_outcome() {
    let (code, doc) = json(&["witt", "solve-frobenius", "-p", "2"]);
    assert_eq!(code, 0);
    let c = only_check(&doc);
    assert_eq!(c["payload"][0]["outcome"]["witness"], "4x_2 ≡ -2 (mod 8)");
}

#[test]
fn composite_prime_is_a_usage_error() {
    let out = run(["pdcalc", "witt", "gabber", "-p", "4"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not prime"));
    assert_eq!(run(["pdcalc", "witt", "no-such-check"]).code, 2);
    assert_eq!(run(["pdcalc", "sen", "dvr", "-E", "2,0,-3"]).code, 2);
}

#[test]
fn b4_and_nseries() {
    let (code, doc) = json(&["fgl", "b4"]);
    assert_eq!(code, 0);
    let b4 = only_check(&doc)["payload"]["b4"].as_str().unwrap().to_string();
    assert!(b4.contains("5*t1^4") && b4.contains("9*v1*t1^3"), "{b4}");
    let (code, doc) = json(&["fgl", "nseries", "--kind", "additive", "-m", "7"]);
    assert_eq!(code, 0);
    assert_eq!(only_check(&doc)["payload"]["series"], "7*x");
    let (code, _) = json(&["fgl", "q-identity", "-p", "3", "--n-max", "20"]);
    assert_eq!(code, 0);
}

#[test]
fn sen_builders() {
    let (code, _) = json(&["sen", "bokstedt", "-p", "3", "-D", "40", "--variant", "T1"]);
    assert_eq!(code, 0);
    let (code, doc) = json(&["sen", "zpn", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(only_check(&doc)["status"], "skipped");
    let (_, doc) = json(&["sen", "dvr", "-p", "3", "-E", "1,0,-3", "-D", "20"]);
    let total = &only_check(&doc)["payload"]["total"]["degrees"];
    assert!(total.as_array().unwrap().iter().any(|d| d["degree"] == 1));
}

#[test]
fn psi_and_weyl() {
    let (_, doc) = json(&["cartier", "psi", "-p", "2", "-n", "3", "-m", "3"]);
    assert_eq!(only_check(&doc)["payload"]["psi"], serde_json::json!(["3", "-3", "-24"]));
    let (_, doc) = json(&["cartier", "psi", "-p", "2", "-n", "2", "-m", "0"]);
    assert_eq!(only_check(&doc)["payload"]["psi"], serde_json::json!(["0", "0"]));
    let (code, _) = json(&["cartier", "weyl", "-p", "2", "-n", "3", "-M", "50"]);
    assert_eq!(code, 0);
}

#[test]
fn tampered_target_fails_with_counterexample() {
    let mut t = Targets::bundled();
    t.fgl.right_unit.b4 = "5*t1^4 + 9*t1^3*v1".into();
    let out = run_with_targets(["pdcalc", "--json", "fgl", "b4"], &t);
    assert_eq!(out.code, 1);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let c = only_check(&doc);
    assert_eq!(c["status"], "fail");
    assert!(c["counterexample"].as_str().unwrap().contains("expected"));
    assert!(out.stderr.contains("fgl.b4"));
}

#[test]
fn config_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("pdcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "p = 5\nL = 3\nformat = json\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let out = run(["pdcalc", "--config", cfg_s, "witt", "gabber"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((doc["config"]["p"].as_u64(), doc["config"]["witt_length"].as_u64()), (Some(5), Some(3)));
    let out = run(["pdcalc", "--config", cfg_s, "-p", "2", "witt", "gabber"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["config"]["p"], 2);
    let report = dir.join("out.json");
    let out = run(["pdcalc", "--json", "-o", report.to_str().unwrap(), "witt", "gabber"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(written["command"], "witt");
    assert_eq!(run(["pdcalc", "--config", dir.join("missing").to_str().unwrap(), "witt", "gabber"]).code, 2);
}

#[test]
fn text_is_the_default_format() {
    let out = run(["pdcalc", "cartier", "psi", "-p", "3", "-m", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("pdcalc ") && out.stdout.contains("pass  cartier.psi"));
}

/// Checks the structural rules of docs/report.schema.json.
fn conforms(doc: &Value) -> Result<(), String> {
    let obj = doc.as_object().ok_or("not an object")?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    for k in ["tool", "version", "command", "config", "checks"] {
        if !keys.contains(&k) {
            return Err(format!("missing {k}"));
        }
    }
    if keys.len() != 5 {
        return Err(format!("extra keys in {keys:?}"));
    }
    for k in ["p", "precision", "witt_length", "degree_bound", "truncation"] {
        if !doc["config"][k].is_u64() {
            return Err(format!("config.{k} is not an integer"));
        }
    }
    for c in doc["checks"].as_array().ok_or("checks not an array")? {
        let status = c["status"].as_str().ok_or("status missing")?;
        if !["pass", "fail", "skipped"].contains(&status) || !c["name"].is_string() || c.get("payload").is_none() {
            return Err(format!("bad check {c}"));
        }
        if status == "fail" && !c["counterexample"].is_string() {
            return Err(format!("failure without counterexample: {}", c["name"]));
        }
    }
    Ok(())
}

#[test]
fn json_output_follows_the_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../docs/report.schema.json")).expect("schema parses");
    assert_eq!(schema["required"].as_array().unwrap().len(), 5);
    for args in [&["witt", "dwork"][..], &["sen", "zpn", "-p", "2"], &["cartier", "delta"]] {
        let (_, doc) = json(args);
        conforms(&doc).unwrap();
    }
    let golden: Value = serde_json::from_str(include_str!("golden/report.json")).unwrap();
    conforms(&golden).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pdcalc");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["witt", "gabber", "-p", "3"]), Some(0));
    assert_eq!(code(&["witt", "gabber", "-p", "4"]), Some(2));
    assert_eq!(code(&["cartier", "delta"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}
