use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ql(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quietlift")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_seeded() {
    let a = ql(&["gen", "regular", "--n", "30", "--d", "3", "--seed", "5"]);
    let b = ql(&["gen", "regular", "--n", "30", "--d", "3", "--seed", "5"]);
    let c = ql(&["gen", "regular", "--n", "30", "--d", "3", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json_of(&a)["edges"].as_array().unwrap().len(), 45);
    let csv = ql(&["gen", "regular", "--n", "30", "--d", "3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("u,v\n"));
    assert_eq!(text.lines().count(), 46);
}

#[test]
fn lift_noise_and_planted_check_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let lift = dir.path().join("lift.json");
    let noisy = dir.path().join("noisy.json");
    assert!(ql(&["gen", "lift", "--builtin", "fig1_d3", "--m", "20", "--seed", "1", "--out", path(&lift)]).status.success());
    let out = ql(&["noise", "--graph", path(&lift), "--epsilon", "0.02", "--mode", "respectful_rand", "--out", path(&noisy)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&noisy).unwrap()).unwrap();
    assert_eq!(v["noise"]["removed"].as_array().unwrap().len(), 4);
    let rep = json_of(&ql(&["sdp", "path-stats", "--graph", path(&noisy), "--witness", "planted", "--delta", "0.2"]));
    assert_eq!(rep["report"]["feasible"], true);
    let lost2 = ql(&["sdp", "lost2", "--graph", path(&lift), "--level", "2", "--delta", "0.3"]);
    assert_eq!(json_of(&lost2)["lost2"]["feasible"], true);
}

#[test]
fn spectrum_certify_exact() {
    let s = json_of(&ql(&["spectrum", "--builtin", "fig3_d4"]));
    assert_eq!(s["ramanujan"]["ramanujan"], true);
    assert!((s["ramanujan"]["extreme"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let c = json_of(&ql(&["certify", "independence", "--builtin", "complete_3"]));
    assert!((c["bound"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    let e = json_of(&ql(&["exact", "max_t_cut", "--builtin", "fig1_d3"]));
    assert_eq!(e["result"]["value"], "17/18");
    let e = json_of(&ql(&["exact", "chromatic", "--builtin", "fig4_d7"]));
    assert_eq!(e["result"]["value"], "3/1");
}

#[test]
fn exit_codes() {
    // pass
    assert_eq!(ql(&["repro", "figures"]).status.code(), Some(0));
    // a Ramanujan base admits no refutation
    assert_eq!(ql(&["sdp", "refute", "--base", "fig1_d3"]).status.code(), Some(1));
    assert_eq!(ql(&["sdp", "refute", "--base", "necklace(10)", "--level", "32"]).status.code(), Some(0));
    // usage errors
    assert_eq!(ql(&["gen", "regular", "--n", "7", "--d", "3"]).status.code(), Some(2));
    assert_eq!(ql(&["spectrum", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(ql(&["repro", "table1", "--row", "bogus"]).status.code(), Some(2));
    assert_eq!(ql(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(ql(&["spectrum", "--graph", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn experiment_outputs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"experiment": "detect", "base": "necklace(5)", "n": 200, "trials": 6, "seed": 9}"#).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(ql(&["repro", "run", "--config", path(&cfg), "--out", path(&a), "--threads", "1"]).status.success());
    assert!(ql(&["repro", "run", "--config", path(&cfg), "--out", path(&b), "--threads", "3"]).status.success());
    for f in ["roc.csv", "detect.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment": "detect", "base": "fig1_d3", "typo": 1}"#).unwrap();
    assert_eq!(ql(&["repro", "run", "--config", path(&bad)]).status.code(), Some(2));
}

#[test]
fn detect_csv_is_the_roc_table() {
    let out = ql(&["detect", "--base", "necklace(5)", "--n", "200", "--trials", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("threshold,type_i,type_ii\n"));
}
