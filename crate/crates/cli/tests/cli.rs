use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocenter")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn rows(v: &Value) -> Vec<(u64, String, i64, u64, u64, bool)> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["m"].as_u64().unwrap(),
                r["weight"].as_str().unwrap().to_string(),
                r["degree"].as_i64().unwrap(),
                r["trace_dim"].as_u64().unwrap(),
                r["weyl_dim"].as_u64().unwrap(),
                r["match"].as_bool().unwrap(),
            )
        })
        .collect()
}

#[test]
fn verify_passes_on_small_sl2_cases() {
    for w in ["2", "1,1"] {
        let v = json(&["verify", "--type", "A1", "--weights", w, "--max-degree", "6", "--m-max", "2"]);
        assert_eq!(v["verdict"], "pass", "weights {w}");
        assert!(rows(&v).iter().all(|r| r.5));
        assert!(v["suites"].as_array().unwrap().iter().all(|s| s["passed"] == true));
        assert_eq!(v["flatness"]["flat"], true);
        assert_eq!(v["cutoffs"]["m_max"], 2);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    }
    let v = json(&["verify", "--type", "A1", "--weights", "1,1", "--m-max", "2"]);
    assert!(rows(&v).contains(&(1, "(0)".into(), 0, 2, 2, true)));
}

#[test]
fn empty_weight_list_gives_one_row() {
    let v = json(&["verify", "--type", "A1", "--weights", "", "--m-max", "2"]);
    assert_eq!(rows(&v), vec![(0, "(0)".into(), 0, 1, 1, true)]);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify", "--type", "A1", "--weights", "2", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn trace_dims_rows() {
    let v = json(&["trace-dims", "--type", "A1", "--weights", "2", "--max-degree", "6", "--deformed", "zero"]);
    let got: Vec<(u64, String, i64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["m"].as_u64().unwrap(),
                r["weight"].as_str().unwrap().into(),
                r["degree"].as_i64().unwrap(),
                r["trace_dim"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        got,
        vec![(0, "(2)".into(), 0, 1), (1, "(0)".into(), 0, 1), (1, "(0)".into(), 2, 1), (2, "(-2)".into(), 0, 1)]
    );
    let generic = json(&["trace-dims", "--type", "A1", "--weights", "2", "--deformed", "generic", "--seed", "3"]);
    assert_eq!(generic, v);
}

#[test]
fn values_file_specialization() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("values.json");
    std::fs::write(
        &values,
        r#"[{"factor": 1, "node": 1, "index": 1, "value": "1/3"}, {"factor": 1, "node": 1, "index": 2, "value": "-2"}]"#,
    )
    .unwrap();
    let zero = json(&["trace-dims", "--weights", "2"]);
    let special = json(&["trace-dims", "--weights", "2", "--deformed", values.to_str().unwrap()]);
    assert_eq!(zero, special);
    let v = json(&["verify", "--weights", "2", "--m-max", "2", "--deformed", values.to_str().unwrap()]);
    assert_eq!(v["deformed"], "values-file");
    assert_eq!(v["flatness"]["values"]["z[k=1,i=1,j=2]"], "-2/1");

    std::fs::write(
        &values,
        r#"[{"factor": 1, "node": 1, "index": 1, "value": "1"}, {"factor": 1, "node": 1, "index": 2, "value": "1"}]"#,
    )
    .unwrap();
    let out = run(&["trace-dims", "--weights", "2", "--deformed", values.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("distinct"));
}

#[test]
fn csv_output() {
    let out = run(&["verify", "--type", "A2", "--weights", "1:0,0:1", "--m-max", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,weight,degree,trace_dim,weyl_dim,match,context"));
    assert!(text.contains("2,\"(0,0)\",0,3,3,true,"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "type = \"A2\"\nweights = \"1:1\"\nmax-degree = 4\nformat = \"json\"\n").unwrap();
    let v = json(&["weyl-char", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["cartan_type"], "A2");
    let total: u64 = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).sum();
    // as a g-module this is V(1:0) ⊗ V(0:1)
    assert_eq!(total, 9);
    // command-line flags win
    let v = json(&["weyl-char", "--config", cfg.to_str().unwrap(), "--weights", "1:0"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    assert_eq!(run(&["weyl-char", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn shapovalov_pairs_file() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.json");
    let s = r#"{"labels": [1], "kappa": [0, 1]}"#;
    let violated = r#"{"labels": [1], "kappa": [1, 1]}"#;
    std::fs::write(&pairs, format!(r#"[{{"s": {s}, "t": {s}}}, {{"s": {violated}, "t": {s}}}]"#)).unwrap();
    let v = json(&["shapovalov", "--type", "A1", "--weights", "2", "--pairs", pairs.to_str().unwrap()]);
    assert_eq!(v[0]["value"], "2/1");
    assert_eq!(v[0]["S"], "1 (1)");
    assert_eq!(v[1]["value"], "0/1");
}

#[test]
fn smaller_subcommands() {
    let v = json(&["symcheck", "--type", "A1", "--weights", "1"]);
    assert!(v.as_array().unwrap().iter().all(|s| s["passed"] == true));
    let v = json(&["klr-dims", "--type", "A1", "--m-max", "2", "--max-degree", "0"]);
    // nilHecke on two strands: the crossing in degree -2; 1, crossing times either dot in degree 0
    let two: Vec<(i64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["m"] == 2)
        .map(|r| (r["degree"].as_i64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(two, vec![(-2, 1), (0, 3)]);
    let v = json(&["tpa-dims", "--type", "A1", "--weights", "1,1", "--m-max", "1"]);
    assert!(v.as_array().unwrap().iter().any(|r| r["S"] == "1 (2) (1)" && r["degree"] == 2 && r["dim"] == 1));
}

#[test]
fn bad_input_is_reported() {
    let out = run(&["verify", "--type", "A2", "--weights", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank 2"));
    let out = run(&["weyl-char", "--type", "G2", "--weights", "1:0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new("G2").exists());
}
