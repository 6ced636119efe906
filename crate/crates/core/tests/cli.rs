use std::process::Command;

use markov_type_lab::experiments::{list_experiments, run, ExperimentConfig};
use serde_json::json;

fn mtlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mtlab"))
}

#[test]
fn catalog_names_and_smoke_configs() {
    let names: Vec<&str> = list_experiments().iter().map(|e| e.name).collect();
    for required in [
        "markov-type",
        "spectral",
        "martingale",
        "hyperbolicity",
        "tree-lowerbound",
        "laakso",
        "extend-tree",
        "net-coloring",
        "glue",
        "cube",
        "paper-suite",
    ] {
        assert!(names.contains(&required), "{required} missing from catalog");
    }
    let again: Vec<&str> = list_experiments().iter().map(|e| e.name).collect();
    assert_eq!(names, again);
    for entry in list_experiments() {
        let text = serde_json::to_string(&entry.smoke).unwrap();
        let config = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(config, entry.smoke);
        let report = run(&config).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        assert!(report.pass, "{} smoke config fails: {}", entry.name, report.summary);
        assert!(!report.rows.is_empty(), "{} produced no rows", entry.name);
    }
}

#[test]
fn spectral_flip_chain_is_a_single_passing_row() {
    let entry = list_experiments().into_iter().find(|e| e.name == "spectral").unwrap();
    let report = run(&entry.smoke).unwrap();
    assert_eq!(report.rows.len(), 1);
    assert!(report.pass);
}

#[test]
fn reports_are_deterministic_and_embed_the_config() {
    let config = ExperimentConfig::new("markov-type")
        .with_instance(
            serde_json::from_value(json!({
                "chain": {"kind": "walk", "graph": {"kind": "cycle", "n": 5}},
                "space": {"kind": "graph", "graph": {"kind": "path", "n": 5}}
            }))
            .unwrap(),
        )
        .with_param("mode", "montecarlo")
        .with_param("trials", 3000)
        .with_param("t_max", 6)
        .with_seed(42);
    let a = run(&config).unwrap();
    let b = run(&config).unwrap();
    assert_eq!(a.deterministic_json(), b.deterministic_json());
    let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(v["config"], serde_json::to_value(&config).unwrap());
    assert_eq!(v["provenance"]["seed"], 42);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let status = mtlab()
            .args(["tree-lowerbound", "--h", "300", "--n", "20", "--trials", "5000", "--seed", "9", "--threads", threads])
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("tree-lowerbound.json")).unwrap()).unwrap();
        v["provenance"].as_object_mut().unwrap().remove("wall_seconds");
        v["config"].as_object_mut().unwrap().remove("out");
        outputs.push((v, std::fs::read_to_string(out.join("tree-lowerbound_moments.csv")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = &outputs[0].1;
    assert!(csv.starts_with("n,E(2M-S)^2,3n\n"));
    assert!(csv.lines().nth(2).unwrap().starts_with("1,1,3") || csv.lines().nth(2).unwrap().starts_with("1,1.0,3"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = mtlab().args(["hyperbolicity", "--space", r#"{"kind":"cube","dim":3}"#]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("delta"));

    // A constant too small for the check: assertion failure.
    let fail = mtlab()
        .args(["hyp-type-check", "--C", "0.1", "--t-max", "4"])
        .args(["--chain", r#"{"kind":"walk","graph":{"kind":"path","n":4}}"#])
        .args(["--space", r#"{"kind":"graph","graph":{"kind":"path","n":4}}"#])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).contains("failing row"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"experiment": "no-such-thing"}"#).unwrap();
    let unknown = mtlab().arg("run").arg("--config").arg(&bad).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));

    let malformed = mtlab().args(["glue", "--space", "{not json"]).output().unwrap();
    assert_eq!(malformed.status.code(), Some(2));

    let precondition = mtlab().args(["cube", "--d", "0"]).output().unwrap();
    assert_eq!(precondition.status.code(), Some(2));
}

#[test]
fn config_file_round_trip_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(
        &config,
        r#"{"experiment": "spectral",
            "instance": {"chain": {"kind": "conductances", "weights": [[1, 2, 0], [2, 0, 1], [0, 1, 3]]},
                         "map": {"kind": "real", "values": [0.1, 0.7, -0.33333333333333331]}},
            "params": {"t_max": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = mtlab().arg("run").arg("--config").arg(&config).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("spectral.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,lambda,Lambda,lhs,rhs,pass");
    assert_eq!(lines.count(), 5);
    // Every float in the CSV parses back to the value in the JSON report.
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("spectral.json")).unwrap()).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    for (rec, row) in rdr.records().zip(report["rows"].as_array().unwrap()) {
        let rec = rec.unwrap();
        assert_eq!(rec[3].parse::<f64>().unwrap(), row["lhs"].as_f64().unwrap());
    }
}

#[test]
fn list_prints_the_catalog() {
    let out = mtlab().arg("list").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().any(|e| e["name"] == "tree-lowerbound"));
}
