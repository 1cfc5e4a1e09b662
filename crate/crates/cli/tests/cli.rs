use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::Registry;
use remezlab_cli::{run, CommandOutcome, EXIT_FINDING, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK};
use serde_json::Value;

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn load_schema(name: &str) -> Value {
    let path = schema_dir().join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn validate(name: &str, instance: &Value) {
    let registry = Registry::new()
        .add("urn:remezlab:schema:trigpoly", load_schema("trigpoly"))
        .unwrap()
        .prepare()
        .unwrap();
    let validator = jsonschema::options()
        .with_registry(&registry)
        .build(&load_schema(name))
        .unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn remezlab(args: &[&str]) -> CommandOutcome {
    let mut all = vec!["remezlab"];
    all.extend_from_slice(args);
    run(all)
}

fn json(out: &CommandOutcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out))
}

const PI_STR: &str = "3.141592653589793";

#[test]
fn bound_examples() {
    let out = remezlab(&["bound", "--kind", "even", "--n", "1", "--s", PI_STR]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    validate("bound", &v);
    assert!((v["bound"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let half = (PI / 2.0).to_string();
    let v = json(&remezlab(&["bound", "--kind", "all", "--n", "1", "--s", &half]));
    assert!((v["bound"].as_f64().unwrap() - 3.0).abs() < 1e-12);

    let out = remezlab(&["bound", "--kind", "even", "--n", "1", "--s", "7"]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stdout.is_empty() && out.stderr.contains("domain"));

    let out = remezlab(&["bound", "--kind", "even", "--n", "400", "--s", "6", "--log"]);
    let v = json(&out);
    validate("bound", &v);
    assert!(v["log_bound"].as_f64().unwrap() > 700.0);
    assert_eq!(remezlab(&["bound", "--kind", "even", "--n", "400", "--s", "6"]).code, EXIT_NUMERICAL);
}

#[test]
fn unknown_flags_are_invalid_input() {
    assert_eq!(remezlab(&["bound", "--kind", "nope", "--n", "1", "--s", "1"]).code, EXIT_INVALID);
    assert_eq!(remezlab(&["frobnicate"]).code, EXIT_INVALID);
    assert_eq!(remezlab(&["--help"]).code, EXIT_OK);
}

#[test]
fn extremal_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("q.json");
    let out = remezlab(&["extremal", "--n", "1", "--s", PI_STR, "--out", file.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let w = json(&out);
    validate("extremal", &w);
    assert!((w["attained_sup"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let poly: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    validate("trigpoly", &poly);
    let coeffs: Vec<f64> = poly["coeffs"].as_array().unwrap().iter().map(|c| c["re"].as_f64().unwrap()).collect();
    for c in coeffs {
        assert!((c - 1.0).abs() < 1e-12);
    }

    let out = remezlab(&["check", file.to_str().unwrap(), "--s", PI_STR]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let v = json(&out);
    validate("check", &v);
    assert_eq!(v["parity"], "even");
    assert_eq!(v["member"], true);
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    let out = remezlab(&["check", file.to_str().unwrap(), "--s", PI_STR, "--backend", "sample"]);
    let sample = json(&out);
    assert!((sample["deficiency"].as_f64().unwrap() - PI).abs() < 1e-7);

    assert_eq!(remezlab(&["extremal", "--n", "1", "--s", "0.0"]).code, EXIT_INVALID);
}

#[test]
fn check_cos_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let cos = dir.path().join("cos.json");
    std::fs::write(&cos, remezlab::TrigPoly::cos(1, 1.0).to_json()).unwrap();
    let v = json(&remezlab(&["check", cos.to_str().unwrap(), "--s", "1"]));
    assert!(v["ratio"].as_f64().unwrap() < 1.0);
    assert_eq!(v["deficiency"].as_f64().unwrap(), 0.0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"degree\": 1, \"coeffs\": [").unwrap();
    assert_eq!(remezlab(&["check", bad.to_str().unwrap(), "--s", "1"]).code, EXIT_INVALID);
    let missing = dir.path().join("missing.json");
    assert_eq!(remezlab(&["check", missing.to_str().unwrap(), "--s", "1"]).code, EXIT_INVALID);
}

#[test]
fn check_reports_non_members_without_a_finding() {
    let dir = tempfile::tempdir().unwrap();
    let q = remezlab::extremal::extremal_even(2, 2.0).unwrap();
    let file = dir.path().join("q.json");
    std::fs::write(&file, q.to_json()).unwrap();
    let out = remezlab(&["check", file.to_str().unwrap(), "--s", "1.0"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stderr.contains("does not apply"));
    let v = json(&out);
    assert_eq!(v["member"], false);
    assert!(v["ratio"].as_f64().unwrap() > 1.0);
    assert_eq!(v["exceeds_bound"], false);
    let v = json(&remezlab(&["check", file.to_str().unwrap(), "--s", "2.0", "--kind", "all"]));
    assert_eq!(v["member"], true);
    assert!(v["ratio"].as_f64().unwrap() < 1.0);
}

#[test]
fn sweep_grid_has_44_rows() {
    let out = remezlab(&["sweep"]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "n,s,kind,bound,sup,ratio,deficiency");
    assert_eq!(lines.len(), 45);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        let ratio: f64 = cols[5].parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-8, "{line}");
        let s: f64 = cols[1].parse().unwrap();
        let d: f64 = cols[6].parse().unwrap();
        assert!((d - s).abs() < 1e-6, "{line}");
    }
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sweep.csv");
    let out = remezlab(&["sweep", "--csv", file.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), remezlab(&["sweep"]).stdout);
}

fn small_audit_config(dir: &Path) -> PathBuf {
    let file = dir.join("audit.json");
    std::fs::write(
        &file,
        r#"{
            "seed": 4,
            "theorem_2_1": {"count": 6, "max_degree": 3, "s_min": 0.5, "s_max": 5.0},
            "theorem_2_2": {"count": 4, "max_degree": 3, "s_min": 0.5, "s_max": 5.0},
            "theorem_2_3": {"count": 4, "max_degree": 3, "s_min": 0.5, "s_max": 3.0},
            "lemma_sets": 20
        }"#,
    )
    .unwrap();
    file
}

#[test]
fn audit_findings_contract() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_audit_config(dir.path());
    let config = config.to_str().unwrap();
    let csv = dir.path().join("rows.csv");

    let out = remezlab(&["audit", "--config", config, "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_FINDING);
    assert!(out.stderr.contains("Lem3.7a") && out.stderr.contains("Lem3.7b"));
    let v = json(&out);
    validate("audit", &v);
    for report in v["reports"].as_array().unwrap() {
        let id = report["claim_id"].as_str().unwrap();
        let holds = report["holds_as_stated"].as_bool().unwrap();
        assert_eq!(holds, !id.starts_with("Lem3.7"), "{report}");
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("claim_id,inputs,lhs,rhs,holds_as_stated,margin,notes\n"));
    assert_eq!(text.lines().count(), v["reports"].as_array().unwrap().len() + 1);

    let out = remezlab(&["audit", "--config", config, "--expect-findings", "Lem3.7a,Lem3.7b"]);
    assert_eq!(out.code, EXIT_OK);
    let out = remezlab(&["audit", "--config", config, "--expect-findings", "Lem3.7a"]);
    assert_eq!(out.code, EXIT_FINDING);

    assert_eq!(remezlab(&["audit"]).code, EXIT_INVALID);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"families": ["Thm9.9"]}"#).unwrap();
    assert_eq!(remezlab(&["audit", "--config", bad.to_str().unwrap()]).code, EXIT_INVALID);
}

#[test]
fn audit_and_search_are_bytewise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_audit_config(dir.path());
    let config = config.to_str().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let a = remezlab(&["audit", "--config", config, "--seed", "11", "--csv", csv_a.to_str().unwrap()]);
    let b = remezlab(&["audit", "--config", config, "--seed", "11", "--csv", csv_b.to_str().unwrap()]);
    assert_eq!(a, b);
    assert_eq!(std::fs::read(&csv_a).unwrap(), std::fs::read(&csv_b).unwrap());
    let c = remezlab(&["audit", "--config", config, "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);

    let args = ["search", "--n", "2", "--s", "2.5", "--restarts", "3", "--budget", "400", "--seed", "3", "--real"];
    assert_eq!(remezlab(&args), remezlab(&args));
}

#[test]
fn search_even_degree_two_reaches_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("best.json");
    let out = remezlab(&[
        "search", "--n", "2", "--s", PI_STR, "--real", "--restarts", "8", "--budget", "3000", "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK, "{out:?}");
    let v = json(&out);
    validate("search", &v);
    assert!(v["best_ratio"].as_f64().unwrap() >= 0.999, "{}", v["best_ratio"]);
    assert_eq!(v["violated"], false);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(written, v["best_poly"]);
}

#[test]
fn search_rejects_bad_configs() {
    assert_eq!(remezlab(&["search", "--n", "1", "--s", "4", "--kind", "all"]).code, EXIT_INVALID);
    assert_eq!(remezlab(&["search", "--n", "1", "--s", "1", "--budget", "10"]).code, EXIT_INVALID);
    assert_eq!(remezlab(&["search", "--n", "1", "--s", "1", "--kind", "classical"]).code, EXIT_INVALID);
}

#[test]
fn binary_exit_codes_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_remezlab");
    let out = Command::new(bin).args(["bound", "--kind", "even", "--n", "1", "--s", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    assert!(out.stdout.is_empty() && !out.stderr.is_empty());
    let out = Command::new(bin)
        .env("REMEZLAB_THREADS", "2")
        .args(["bound", "--kind", "even", "--n", "2", "--s", PI_STR])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["bound"].as_f64().unwrap() - 17.0).abs() < 1e-11);
    let out = Command::new(bin)
        .env("REMEZLAB_THREADS", "many")
        .args(["bound", "--kind", "even", "--n", "1", "--s", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
}
