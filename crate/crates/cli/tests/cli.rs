use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bgm_core::families::cycle_reduce;
use bgm_core::io::CertificateDoc;
use bgm_core::{basis, catalog};

fn bgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgm"))
        .args(args)
        .output()
        .expect("failed to spawn bgm")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn width_of_c5_is_exactly_four() {
    let out = bgm(&["width", "--graph", "C5", "--dmax", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"exact\":true,\"value\":4}\n");
}

#[test]
fn width_without_dmax_uses_the_certified_bound() {
    let out = bgm(&["width", "--graph", "C4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"exact\":true,\"value\":4}\n");
}

#[test]
fn matrix_matches_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "4\n0 1\n1 2\n").unwrap();
    let out = bgm(&["matrix", "--graph", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let expected = "\
1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 1 1 1 1 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 1 1 1 1 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1
1 1 0 0 0 0 0 0 1 1 0 0 0 0 0 0
0 0 1 1 0 0 0 0 0 0 1 1 0 0 0 0
0 0 0 0 1 1 0 0 0 0 0 0 1 1 0 0
0 0 0 0 0 0 1 1 0 0 0 0 0 0 1 1
1 0 1 0 1 0 1 0 1 0 1 0 1 0 1 0
0 1 0 1 0 1 0 1 0 1 0 1 0 1 0 1
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn basis_json_shape_for_c4() {
    let out = bgm(&["basis", "--graph", "C4"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["degrees"]["2"]["count"], serde_json::json!(8));
    assert_eq!(v["degrees"]["4"]["count"], serde_json::json!(8));
    assert_eq!(v["width"]["exact"], serde_json::json!(true));
    assert_eq!(v["width"]["value"], serde_json::json!(4));
    assert!(v.get("partial").is_none());
}

#[test]
fn starved_basis_reports_partial_and_exits_three() {
    let out = bgm(&["basis", "--graph", "K5", "--budget", "100000"]);
    assert_eq!(code(&out), 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["partial"], serde_json::json!(true));
    assert!(v["partial_reason"].as_str().unwrap().contains("budget"));
    assert_eq!(v["width"]["exact"], serde_json::json!(false));
}

#[test]
fn unknown_graph_is_a_usage_error() {
    let out = bgm(&["width", "--graph", "no-such-graph", "--dmax", "4"]);
    assert_eq!(code(&out), 2);
    let out = bgm(&["no-such-subcommand"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn forest_degree_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.txt");
    fs::write(&path, "4\n0 1\n1 2\n2 3\n").unwrap();
    let out = bgm(&["forest-degree", "--graph", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "34 (oracle: 34)\n");
    // Not a forest: capability error.
    let out = bgm(&["forest-degree", "--graph", "C4"]);
    assert_eq!(code(&out), 3);
}

fn write_reps(path: &Path, report: &serde_json::Value, degrees: &[&str]) {
    let mut reps = Vec::new();
    for d in degrees {
        reps.extend(report["degrees"][d]["reps"].as_array().unwrap().clone());
    }
    fs::write(path, serde_json::to_string(&reps).unwrap()).unwrap();
}

#[test]
fn verify_accepts_the_basis_and_rejects_a_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let basis_out = bgm(&["basis", "--graph", "C4"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&basis_out)).unwrap();

    let full = dir.path().join("full.json");
    write_reps(&full, &report, &["2", "4"]);
    let out = bgm(&["verify", "--graph", "C4", "--moves", full.to_str().unwrap(), "--dmax", "4"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["disconnected_fibers"], serde_json::json!(0));

    let quads = dir.path().join("quads.json");
    write_reps(&quads, &report, &["2"]);
    let out = bgm(&["verify", "--graph", "C4", "--moves", quads.to_str().unwrap(), "--dmax", "4"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["disconnected_fibers"].as_u64().unwrap() > 0);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn sample_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("start.txt");
    fs::write(&start, "0000 1\n0011 1\n0101 1\n1111 1\n").unwrap();
    let args = [
        "sample", "--graph", "C4", "--start", start.to_str().unwrap(), "--steps", "500",
        "--seed", "11",
    ];
    let a = bgm(&args);
    let b = bgm(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let other = bgm(&[
        "sample", "--graph", "C4", "--start", start.to_str().unwrap(), "--steps", "500",
        "--seed", "12",
    ]);
    assert_ne!(stdout(&a), stdout(&other));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["accepted"].as_u64().unwrap() > 0);
}

#[test]
fn reproduce_table_reports_skips_and_the_known_mismatches() {
    let out = bgm(&["reproduce-table", "--budget", "100000", "--format", "csv"]);
    // The published table's G151/G153 columns do not match their
    // published edge sets; the diff surfaces that as a mismatch.
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("K3,4,1,1,ok"));
    assert!(text.contains("C4,2,8,8,ok"));
    assert!(text.contains("G151,2,280,344,mismatch"));
    assert!(text.contains("G153,2,320,360,mismatch"));
    assert!(text.contains(",skipped"));
    let mismatches = text.lines().filter(|l| l.ends_with(",mismatch")).count();
    assert_eq!(mismatches, 2);
}

#[test]
fn replay_validates_and_rejects_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let g = catalog::cycle(4);
    let quartics = basis::minimal_binomials_at_degree(&g, 4, 1_000_000).unwrap();
    let cert = cycle_reduce(4, &quartics[0].plus, &quartics[0].minus).unwrap();
    let doc = CertificateDoc::of(&g, &cert);
    let good = dir.path().join("good.json");
    fs::write(&good, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = bgm(&["replay", "--cert", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], serde_json::json!(true));

    // Drop the last step: the path no longer reaches the end table.
    let mut broken = doc.clone();
    broken.path.pop();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&broken).unwrap()).unwrap();
    let out = bgm(&["replay", "--cert", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn classify_finds_the_k3_quartic_by_pullback() {
    let out = bgm(&["classify", "--graph", "K3", "--dmax", "4"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let quartics = v["degrees"]["4"]["candidates"].as_array().unwrap();
    let minimal: Vec<_> = quartics
        .iter()
        .filter(|c| c["minimal"] == serde_json::json!(true))
        .collect();
    assert_eq!(minimal.len(), 1);
    assert_eq!(minimal[0]["provenance"]["kind"], serde_json::json!("pullback"));
    // K3 is complete: no degree-2 classes, no cubics.
    assert!(v["degrees"]["2"]["classes"].as_array().unwrap().is_empty());
    assert!(v["degrees"]["3"]["generators"].as_array().unwrap().is_empty());
}
