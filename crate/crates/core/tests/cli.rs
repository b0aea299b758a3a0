use std::process::{Command, Output};

use cyclic_planes::algebra::PolyFile;
use cyclic_planes::milnor::{CoverDatum, MilnorData};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_with_threads(args, None)
}

fn run_with_threads(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclic-planes"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CYCLIC_PLANES_THREADS", t),
        None => cmd.env_remove("CYCLIC_PLANES_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hodge_fermat() {
    let out = run(&["hodge", "--d", "2", "--m", "3", "--f", "fermat"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["h20"], 1);
    assert_eq!(v["h11_prim"], 19);
    assert_eq!(v["h11_full"], 20);
    assert_eq!(v["h1_theta0"], 19);
    assert_eq!(v["oracles"]["pushforward_pg"], 1);
    assert_eq!(v["consistent"], true);
}

#[test]
fn hodge_random_triple_cover() {
    let out = run(&["hodge", "--d", "3", "--m", "3", "--f", "random", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["h20"].as_u64(), v["h11_prim"].as_u64()), (Some(11), Some(92)));
}

#[test]
fn hodge_allows_m_two() {
    let out = run(&["hodge", "--d", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!json(&out)["negative_degree"].as_array().unwrap().is_empty());
}

#[test]
fn picard_exit_codes() {
    assert_eq!(run(&["picard-check", "--d", "2", "--m", "4", "--seed", "1"]).status.code(), Some(0));
    let refused = run(&["picard-check", "--d", "2", "--m", "2"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("m >= 3"));
    let alt = run(&["picard-check", "--d", "3", "--m", "3", "--prime", "1000003", "--seed", "2"]);
    assert_eq!(alt.status.code(), Some(0));
    let v = json(&alt);
    assert_eq!(v["prime"], 1_000_003);
    assert_eq!(v["smoothness"], "heuristic-pass");
    assert_eq!(v["t_level"]["target_dim"], 146);
    assert_eq!(v["r_level"]["target_dim"], 92);
}

#[test]
fn picard_cross_check() {
    let out = run(&["picard-check", "--d", "2", "--m", "3", "--check-prime", "1000003"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cross_check"]["prime"], 1_000_003);
    assert_eq!(v["cross_check"]["positive"], true);
}

#[test]
fn seshadri_single() {
    let out = run(&["seshadri", "--d", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lower"], serde_json::json!({"a": "-2/3", "b": "1", "rad": 2}));
    assert_eq!(v["upper"], serde_json::json!({"a": "0", "b": "1", "rad": 2}));
    assert_eq!(v["trace"].as_array().unwrap().len(), 6);
    assert_eq!(run(&["seshadri", "--d", "2", "--m", "2"]).status.code(), Some(2));
}

#[test]
fn table_csv_and_json_agree() {
    let csv = run(&["table", "--d", "2..4", "--m", "3..6", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 13);
    let headers: Vec<&str> = lines[0].split(',').collect();

    let js = json(&run(&["table", "--d", "2..4", "--m", "3..6"]));
    let rows = js["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for (line, row) in lines[1..].iter().zip(rows) {
        let cells: Vec<&str> = line.split(',').collect();
        let col = |name: &str| cells[headers.iter().position(|h| *h == name).unwrap()];
        assert_eq!(col("lower_a"), row["lower"]["a"]);
        assert_eq!(col("lower_b"), row["lower"]["b"]);
        assert_eq!(col("upper_a"), row["upper"]["a"]);
        assert_eq!(col("rad"), row["lower"]["rad"].to_string());
        assert_eq!(col("clamped"), row["clamped"].to_string());
        assert_eq!(col("eliminated_k"), row["eliminated_k"]);
    }
}

#[test]
fn table_marks_unmet_hypothesis() {
    let out = run(&["table", "--d", "2", "--m", "2..3", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("hypothesis m≥3 unmet"));
}

#[test]
fn hilbert_prefix_and_marks() {
    let v = json(&run(&["hilbert", "--d", "2", "--m", "3"]));
    assert_eq!(v["coefficients"], serde_json::json!([1, 3, 6, 10, 15, 18, 19]));
    assert_eq!(v["marked"], serde_json::json!({"h20": 0, "h11_prim": 6, "h1_theta0": 6}));
    let v = json(&run(&["hilbert", "--d", "3", "--m", "3"]));
    assert_eq!(v["coefficients"][12], 92);
    let csv = run(&["hilbert", "--d", "2", "--m", "4", "--order", "9", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().last(), Some("9,37,h11_prim"));
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(run(&["table", "--d", "4..2", "--m", "3"]).status.code(), Some(1));
    assert_eq!(run(&["hodge", "--d", "x", "--m", "3"]).status.code(), Some(1));
    assert_eq!(run(&["hodge", "--d", "2", "--m", "3", "--prime", "10"]).status.code(), Some(1));
    assert_eq!(run(&["hodge", "--d", "2", "--m", "3", "--f", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn output_file_and_polynomial_file() {
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("fermat.json");
    let cover = CoverDatum::new(2, 3).unwrap();
    let file: PolyFile = MilnorData::fermat(cover).f().to_interchange(cover.weights());
    std::fs::write(&poly_path, serde_json::to_string(&file).unwrap()).unwrap();

    let out_path = dir.path().join("hodge.json");
    let p = poly_path.to_str().unwrap();
    let o = out_path.to_str().unwrap();
    let status = run(&["hodge", "--d", "2", "--m", "3", "--f", p, "--output", o]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!((v["h20"].as_u64(), v["h11_prim"].as_u64()), (Some(1), Some(19)));
    assert_eq!(v["config"]["output"], o);

    // wrong weight system is rejected
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, serde_json::to_string(&file).unwrap()).unwrap();
    let out = run(&["hodge", "--d", "2", "--m", "4", "--f", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["table", "--d", "2..5", "--m", "2..7"],
        vec!["picard-check", "--d", "3", "--m", "4", "--seed", "3"],
        vec!["hodge", "--d", "3", "--m", "4", "--f", "random", "--seed", "9"],
    ] {
        let a = run_with_threads(&args, Some("1"));
        let b = run_with_threads(&args, Some("4"));
        let c = run(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
        assert!(!a.stdout.is_empty());
    }
}
