use std::path::Path;
use std::process::{Command, Output};

use hindman_core::CatalogFile;
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hindman-lab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_catalog(dir: &Path, name: &str, file: &CatalogFile) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(file).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn color_prints_one_line_per_code() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write_catalog(dir.path(), "cat.json", &CatalogFile::builtin());
    let out = lab(&["color", "c31", &cat, "1..8"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("1, {0}, "));
    assert!(lines[7].starts_with("8, {3}, "));
}

#[test]
fn color_accepts_brace_sets() {
    let dir = tempfile::tempdir().unwrap();
    let cat = write_catalog(dir.path(), "cat.json", &CatalogFile::builtin());
    let out = lab(&["color", "c34", &cat, "{1,4}"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let line = text.trim();
    assert!(line == "18, {1,4}, 0" || line == "18, {1,4}, 1", "{line}");
}

#[test]
fn color_trace_emits_json_steps() {
    let out = lab(&["color", "c33", "--trace", "13"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("13, {0,2,3}, "));
    let steps: Vec<Value> = lines.map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|s| s.get("rule").is_some() && s.get("color").is_some()));
}

#[test]
fn invalid_catalog_kind_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"families":[{"kind":"oracle_machine"}]}"#).unwrap();
    assert_eq!(code(&lab(&["color", "c31", path.to_str().unwrap(), "1"])), 2);
    assert_eq!(code(&lab(&["verify", "c31", "--catalog", path.to_str().unwrap()])), 2);
    assert_eq!(code(&lab(&["color", "c31", "missing-file.json", "1"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&lab(&["frobnicate"])), 2);
    assert_eq!(code(&lab(&["verify", "c99"])), 2);
    assert_eq!(code(&lab(&["verify", "c31", "--bound", "lots"])), 2);
    assert_eq!(code(&lab(&["color", "c31", "{3,1}"])), 2);
    assert_eq!(code(&lab(&["verify", "c31", "--claim", "no-such-claim"])), 2);
    assert_eq!(code(&lab(&["search", "random:r=2"])), 2);
}

#[test]
fn overflow_exits_3() {
    assert_eq!(code(&lab(&["color", "c31", "{64}"])), 3);
    assert_eq!(code(&lab(&["color", "c31", "1..18446744073709551616"])), 3);
    assert_eq!(code(&lab(&["verify", "c31", "--bound", "2^65"])), 3);
    assert_eq!(code(&lab(&["search", "const", "--bound", "2^70"])), 3);
}

#[test]
fn verify_c31_on_singletons_is_verified_with_a_versioned_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let csv = dir.path().join("report.csv");
    let out = lab(&[
        "verify",
        "c31",
        "--catalog",
        "singletons",
        "--bound",
        "2^14",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report = read_json(&json);
    assert_eq!(report["report_version"], 1);
    assert_eq!(report["coloring"], "c31");
    assert_eq!(report["catalog"]["reference"], "singletons");
    let claims = report["claims"].as_array().unwrap();
    assert!(claims.iter().all(|c| c["status"] == "verified"));
    for field in ["claim", "universe_bound", "status", "witness", "wall_time_ms"] {
        assert!(claims.iter().all(|c| c.get(field).is_some()), "{field}");
    }

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), claims.len());
    let column = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for (row, claim) in rows.iter().zip(claims) {
        assert_eq!(&row[column("claim")], claim["claim"].as_str().unwrap());
        assert_eq!(&row[column("status")], claim["status"].as_str().unwrap());
        assert_eq!(serde_json::from_str::<Value>(&row[column("witness")]).unwrap(), claim["witness"]);
    }
}

#[test]
fn non_ip_catalog_makes_claims_vacuous() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = lab(&["verify", "c32:k=1", "finite", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = read_json(&json);
    let defeat = report["claims"].as_array().unwrap().iter().find(|c| c["claim"] == "s32-defeat").unwrap();
    assert_eq!(defeat["status"], "verified");
    let instances = defeat["witness"]["instances"].as_array().unwrap();
    assert!(!instances.is_empty());
    assert!(instances.iter().all(|i| i["vacuous"] == true));
}

#[test]
fn injected_fault_is_reported_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("fault.json");
    let out = lab(&["verify", "c33", "--inject-fault", "37", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = read_json(&json);
    let violated: Vec<&Value> =
        report["claims"].as_array().unwrap().iter().filter(|c| c["status"] == "violated").collect();
    assert!(!violated.is_empty());
    assert!(violated.iter().all(|c| c["counterexample"]["reason"].is_string()));

    let replay = lab(&["replay", json.to_str().unwrap()]);
    assert_eq!(code(&replay), 1);
    let text = stdout(&replay);
    assert_eq!(text.lines().count(), violated.len());
    assert!(text.lines().all(|l| l.ends_with("reproduced")), "{text}");
}

#[test]
fn tampered_report_does_not_replay() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("fault.json");
    assert_eq!(code(&lab(&["verify", "c31", "--inject-fault", "5", "--json", json.to_str().unwrap()])), 1);
    let mut report = read_json(&json);
    for claim in report["claims"].as_array_mut().unwrap() {
        if let Some(cx) = claim.get_mut("counterexample") {
            cx["reason"] = Value::from("edited");
        }
    }
    std::fs::write(&json, serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(code(&lab(&["replay", json.to_str().unwrap()])), 2);

    report["report_version"] = Value::from(2);
    std::fs::write(&json, serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(code(&lab(&["replay", json.to_str().unwrap()])), 2);
}

#[test]
fn claims_past_the_horizon_exhaust() {
    let out = lab(&["verify", "c32:k=2", "--claim", "s32-defeat", "--horizon", "30"]);
    assert_eq!(code(&out), 4, "{}", stdout(&out));
}

#[test]
fn search_examples() {
    let out = lab(&["search", "const", "-m", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("{{0},{1},{2}}"));

    let out = lab(&["search", "c31", "-m", "2", "--bound", "2^14"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verified: true"));

    let out = lab(&["search", "parity", "-m", "3", "--bound", "2"]);
    assert_eq!(code(&out), 4);
    assert_eq!(stdout(&out).trim(), "none within bound");

    let out = lab(&["search", "random:seed=3", "-m", "2", "--method", "brute", "--bound", "256"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn match_examples() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cert.json");
    let out = lab(&["match", "half", "const", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cert = read_json(&json);
    assert_eq!(cert["certificate"]["branch"], "second_case");
    assert_eq!(cert["verified"], true);

    let out = lab(&["match", "hindman", "parity", "-m", "2"]);
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["verified"], true);
    assert_eq!(cert["certificate"]["family"].as_array().unwrap().len(), 2);

    let out = lab(&["match", "full", "const:1", "-r", "1"]);
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["certificate"]["branch"], "monochromatic_family");
}

#[test]
fn match_reports_exhaustion() {
    let out = lab(&["match", "hindman", "parity", "-m", "4", "--bound", "4"]);
    assert_eq!(code(&out), 4);
}
