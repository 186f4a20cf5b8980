use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn featnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_featnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sample_csv() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic_mixed.csv")
}

fn error_line(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("stderr is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bundled_dataset_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = featnet(&["--input", sample_csv().to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let graph = read_json(&out_dir.join("graph.json"));
    let charts = read_json(&out_dir.join("charts.json"));
    let manifest = read_json(&out_dir.join("manifest.json"));

    let nodes = graph["nodes"].as_array().unwrap();
    let edges = graph["edges"].as_array().unwrap();
    assert_eq!(nodes.len(), 24);
    assert_eq!(graph["meta"]["n_features"], 24);
    assert_eq!(manifest["n_features"], 24);
    assert_eq!(manifest["n_edges_full"], 24 * 23 / 2);
    assert_eq!(manifest["n_edges_retained"].as_u64().unwrap() as usize, edges.len());
    assert_eq!(manifest["n_components"], graph["meta"]["n_components"]);
    assert_eq!(manifest["n_charts"].as_u64().unwrap() as usize, charts.as_object().unwrap().len());
    for e in edges {
        let id = e["chart"].as_str().unwrap();
        let chart = &charts[id];
        assert!(chart.is_object(), "missing chart {id}");
        for key in ["type", "x_feature", "y_feature", "payload"] {
            assert!(chart.get(key).is_some());
        }
    }
    for key in ["n_features", "n_records", "alpha", "n_components", "discrete_threshold", "k_neighbors", "seed"] {
        assert!(graph["meta"].get(key).is_some(), "meta.{key}");
    }
    for key in ["id", "name", "kind", "degree", "x", "y"] {
        assert!(nodes[0].get(key).is_some(), "node.{key}");
    }
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["n_edges_retained"].as_u64().unwrap() as usize, edges.len());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let input = sample_csv();
    let args = ["--input", input.to_str().unwrap(), "--output-dir", out_dir.to_str().unwrap(), "--seed", "9"];
    let read = || -> Vec<Vec<u8>> {
        assert!(featnet(&args).status.success());
        ["graph.json", "charts.json", "manifest.json"]
            .iter()
            .map(|f| std::fs::read(out_dir.join(f)).unwrap())
            .collect()
    };
    assert_eq!(read(), read());
}

#[test]
fn flags_reach_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tabbed.tsv");
    let mut text = String::from("a\tb\tc\n");
    for i in 0..80 {
        text.push_str(&format!("{}\t{}\t{}\n", i % 3, (i * 7) % 11, if i % 5 == 0 { "" } else { "z" }));
    }
    std::fs::write(&input, text).unwrap();
    let out_dir = dir.path().join("out");
    let out = featnet(&[
        "--input", input.to_str().unwrap(),
        "--output-dir", out_dir.to_str().unwrap(),
        "--delimiter", "tab",
        "--discrete-threshold", "5",
        "--k-neighbors", "4",
        "--alpha", "0.9",
        "--null-policy", "null-category",
        "--seed", "3",
        "--layout-iterations", "20",
        "--max-scatter-points", "10",
        "--no-charts",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_dir.join("charts.json").exists());
    let manifest = read_json(&out_dir.join("manifest.json"));
    let config = &manifest["config"];
    assert_eq!(config["delimiter"], "\t");
    assert_eq!(config["k_neighbors"], 4);
    assert_eq!(config["null_policy"], "null-category");
    assert_eq!(manifest["alpha_chosen"], 0.9);
    assert_eq!(manifest["alpha_from_sweep"], false);
    let kinds: Vec<&str> = manifest["features"].as_array().unwrap().iter().map(|f| f["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["discrete", "continuous", "discrete"]);
    let graph = read_json(&out_dir.join("graph.json"));
    assert!(graph["edges"].as_array().unwrap().iter().all(|e| e["chart"].is_null()));
}

#[test]
fn missing_input_exits_one() {
    let out = featnet(&["--input", "/definitely/not/here.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "missing_file");
}

#[test]
fn ragged_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    std::fs::write(&input, "a,b\n1,2\n3\n").unwrap();
    let out = featnet(&["--input", input.to_str().unwrap(), "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = error_line(&out);
    assert_eq!(err["error"], "ragged_row");
    assert!(err["message"].as_str().unwrap().contains('3'));
    assert!(!dir.path().join("graph.json").exists());
}

#[test]
fn bad_configuration_exits_two() {
    let csv = sample_csv();
    let input = csv.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    for args in [
        vec!["--input", input, "--output-dir", out_dir, "--alpha", "1.5"],
        vec!["--input", input, "--output-dir", out_dir, "--k-neighbors", "0"],
        vec!["--input", input, "--output-dir", out_dir, "--discrete-threshold", "1"],
        vec!["--input", input, "--output-dir", out_dir, "--null-policy", "sometimes"],
        vec!["--input", input, "--output-dir", out_dir, "--delimiter", ";;"],
        vec!["--input", input, "--output-dir", out_dir, "--null-policy-override", "b0_flag=fill-median"],
        vec!["--input", input, "--output-dir", out_dir, "--null-policy-override", "nosuch=fill-min"],
        vec!["--output-dir", out_dir],
    ] {
        let out = featnet(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_line(&out)["error"], "config", "{args:?}");
    }
    assert!(!dir.path().join("graph.json").exists());
}

#[test]
fn help_exits_zero() {
    let out = featnet(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--input", "--output-dir", "--discrete-threshold", "--k-neighbors", "--alpha", "--null-policy", "--seed",
        "--layout-iterations", "--max-scatter-points", "--delimiter", "--no-charts"] {
        assert!(text.contains(flag), "{flag}");
    }
}
