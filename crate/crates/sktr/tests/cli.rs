use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn sktr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sktr")).args(args).output().expect("run sktr")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn recover_json(extra: &[&str]) -> Value {
    let model = fixture("running_example.pnml");
    let log = fixture("table1.skcsv");
    let mut args = vec!["recover", "--model", path(&model), "--log", path(&log)];
    args.extend_from_slice(extra);
    let out = sktr(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn recovered(v: &Value) -> String {
    v["traces"][0]["recovered"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect()
}

#[test]
fn recover_exponential() {
    let v = recover_json(&["--cost", "exp"]);
    assert_eq!(recovered(&v), "BCE");
    let cost = v["traces"][0]["total_cost"].as_f64().unwrap();
    assert!((cost - 1.8168).abs() < 1e-3, "{cost}");
    assert_eq!(v["traces"][0]["is_tie"], false);
}

#[test]
fn recover_linear_reports_tie() {
    let v = recover_json(&["--cost", "lin"]);
    let t = &v["traces"][0];
    assert_eq!(t["is_tie"], true);
    assert!((t["total_cost"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    assert_eq!(t["tie_candidates"].as_array().unwrap().len(), 2);
}

#[test]
fn recover_logarithmic() {
    let v = recover_json(&["--cost", "log", "--c", "2.4"]);
    assert_eq!(recovered(&v), "ADF");
    let cost = v["traces"][0]["total_cost"].as_f64().unwrap();
    assert!((cost - 0.9765).abs() < 1e-3, "{cost}");
}

#[test]
fn recover_astar_agrees() {
    let v = recover_json(&["--cost", "exp", "--astar"]);
    assert_eq!(recovered(&v), "BCE");
}

#[test]
fn recover_argmax() {
    let v = recover_json(&["--method", "argmax"]);
    assert_eq!(recovered(&v), "ACE");
}

#[test]
fn recover_writes_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("running_example.pnml");
    let log = fixture("table1.skcsv");
    let out = sktr(&["recover", "--model", path(&model), "--log", path(&log), "--out", path(dir.path())]);
    assert!(out.status.success());
    for f in ["report.json", "recovered.skcsv", "recovered.xes"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(dir.path().join("recovered.skcsv")).unwrap();
    assert!(csv.contains("1,e1,B:1,2022-06-03T12:00:00.000Z"), "{csv}");
}

#[test]
fn missing_input_is_a_validation_error() {
    let out = sktr(&["recover", "--model", "/nonexistent.pnml", "--log", path(&fixture("table1.skcsv"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent.pnml"));
}

#[test]
fn malformed_log_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.skcsv");
    fs::write(&bad, "case_id,event_id,distribution\n1,e1,A:0.5;B:0.4\n").unwrap();
    let out = sktr(&["recover", "--model", path(&fixture("running_example.pnml")), "--log", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreachable_final_marking_is_infeasible() {
    let out = sktr(&["recover", "--model", path(&fixture("dead_end.pnml")), "--log", path(&fixture("table1.skcsv"))]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn state_cap_is_a_resource_error() {
    let out = sktr(&[
        "recover",
        "--model",
        path(&fixture("running_example.pnml")),
        "--log",
        path(&fixture("table1.skcsv")),
        "--max-states",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn final_marking_sidecar_is_picked_up() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("l.skcsv");
    fs::write(&log, "case_id,event_id,distribution\n1,e1,A:1\n").unwrap();
    let out = sktr(&["recover", "--model", path(&fixture("silent_loop.pnml")), "--log", path(&log)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn align_emits_moves() {
    let out = sktr(&[
        "align",
        "--model",
        path(&fixture("running_example.pnml")),
        "--log",
        path(&fixture("table1.skcsv")),
        "--emit-alignment",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let moves = v[0]["moves"].as_array().unwrap();
    let kinds: Vec<&str> = moves.iter().map(|m| m["kind"].as_str().unwrap()).collect();
    assert!(kinds.iter().all(|k| ["sync", "model", "log"].contains(k)));
    let total: f64 = moves.iter().map(|m| m["cost"].as_f64().unwrap()).sum();
    assert!((total - v[0]["total_cost"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn product_writes_moves_and_pnml() {
    let dir = tempfile::tempdir().unwrap();
    let out = sktr(&[
        "product",
        "--model",
        path(&fixture("running_example.pnml")),
        "--log",
        path(&fixture("table1.skcsv")),
        "--out",
        path(dir.path()),
    ]);
    assert!(out.status.success());
    let moves = fs::read_to_string(dir.path().join("moves.csv")).unwrap();
    // 6 model moves, 6 log moves, one sync per label shared by model and trace net
    assert_eq!(moves.lines().count(), 1 + 6 + 6 + 6);
    let net = sktr::pnml::read_pnml(&dir.path().join("product.pnml"), None).unwrap();
    assert_eq!(net.transition_count(), 18);
    assert_eq!(net.place_count(), 6 + 4);
}

#[test]
fn sweep_argmax_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let synth = sktr(&["synth", "--traces", "50", "--seed", "3", "--out", path(dir.path())]);
    assert!(synth.status.success());
    let out_dir = dir.path().join("sweep");
    let out = sktr(&[
        "sweep",
        "--model",
        path(&dir.path().join("model.pnml")),
        "--log",
        path(&dir.path().join("log.xes")),
        "--nt",
        "2",
        "--tp",
        "1",
        "--grid",
        "0:1:0.05",
        "--methods",
        "argmax",
        "--seed",
        "1",
        "--out",
        path(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(out_dir.join("sweep.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 21);
    assert_eq!(&rows[0][3], "0");
    assert_eq!(&rows[20][3], "1");
    let v: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 21);
}

#[test]
fn inject_then_recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sktr(&["synth", "--traces", "20", "--seed", "5", "--out", path(dir.path())]).status.success());
    let noisy = dir.path().join("noisy");
    let out = sktr(&[
        "inject",
        "--log",
        path(&dir.path().join("log.xes")),
        "--pa",
        "1",
        "--seed",
        "2",
        "--out",
        path(&noisy),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let noisy_log = sktr::read_log(&noisy.join("noisy.skcsv")).unwrap();
    let truth = sktr::read_log(&noisy.join("truth.skcsv")).unwrap();
    assert_eq!(noisy_log.len(), 20);
    for (n, t) in noisy_log.iter().zip(&truth) {
        assert_eq!(n.len(), t.len());
        for (a, b) in n.events().iter().zip(t.events()) {
            // P_a = 1: the true label always carries the largest mass
            assert_eq!(a.argmax(), b.argmax());
        }
    }
}

#[test]
fn subsample_splits_log() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sktr(&["synth", "--traces", "30", "--seed", "8", "--out", path(dir.path())]).status.success());
    let out_dir = dir.path().join("split");
    let out = sktr(&[
        "subsample",
        "--log",
        path(&dir.path().join("log.xes")),
        "--count",
        "10",
        "--seed",
        "1",
        "--out",
        path(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files: Vec<PathBuf> = fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().path()).collect();
    let sizes: Vec<usize> = files.iter().map(|f| sktr::read_log(f).unwrap().len()).collect();
    assert_eq!(sizes.iter().sum::<usize>(), 30);
    assert!(sizes.contains(&10));
}
