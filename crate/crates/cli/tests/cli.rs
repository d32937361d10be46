use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mincut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mincut")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mincut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dist_exact_on_planted_graph() {
    let out = mincut(&["dist-exact", "--gen", "planted:10,10,3,0.9", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    let trial = &recs[0];
    assert_eq!(trial["weight"], 3);
    assert_eq!(trial["oracle_weight"], 3);
    assert_eq!(trial["ratio"], 1.0);
    assert!(trial["rounds"].as_u64().unwrap() > 0);
    assert_eq!(trial["max_msgs_per_edge"], 1);
    assert_eq!(trial["graph"]["hash"].as_str().unwrap().len(), 64);
    assert_eq!(recs[1]["record"], "summary");
}

#[test]
fn seq_approx_cycle_ratios() {
    let out = mincut(&["seq-approx", "--gen", "cycle:8", "--eps", "0.5", "--trials", "20"]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(recs.len(), 21);
    for r in &recs[..20] {
        assert!(r["ratio"].as_f64().unwrap() <= 1.5);
    }
    let summary = &recs[20];
    assert!(summary["max_ratio"].as_f64().unwrap() <= 1.5);
    assert_eq!(summary["within_bound"], true);
}

#[test]
fn one_respect_from_file() {
    let path = scratch("g.edges");
    let gen = mincut(&["gen", "--gen", "planted:6,6,2,1.0", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = mincut(&["one-respect", "--graph", path.to_str().unwrap(), "--seed", "1"]);
    assert!(out.status.success());
    let rec = &records(&out)[0];
    let side: Vec<u64> = rec["side"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(side.contains(&rec["argmin"].as_u64().unwrap()));
    assert!(rec["weight"].as_u64().unwrap() >= rec["oracle_weight"].as_u64().unwrap());
    assert!(rec["rounds"].as_u64().unwrap() > 0);
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: &Output| -> Vec<Value> {
        records(out)
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_ms");
                r
            })
            .collect()
    };
    let args = ["dist-approx", "--gen", "weighted:8,0.6,3", "--seed", "3", "--trials", "3", "--eps", "1"];
    let a = mincut(&args);
    let b = mincut(&args);
    assert!(a.status.success());
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn sequential_engine_matches_parallel() {
    let base = ["one-respect", "--gen", "regular:300,4", "--seed", "2"];
    let a = mincut(&base);
    let b = mincut(&[&base[..], &["--sequential"]].concat());
    let strip = |out: &Output| {
        let mut r = records(out).remove(0);
        r.as_object_mut().unwrap().remove("wall_ms");
        r
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn out_and_trace_files() {
    let report = scratch("report.jsonl");
    let trace = scratch("trace.jsonl");
    let out = mincut(&[
        "one-respect",
        "--gen",
        "cycle:6",
        "--out",
        report.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let lines = std::fs::read_to_string(&report).unwrap();
    assert_eq!(lines.lines().count(), 2);
    let first: Value = serde_json::from_str(std::fs::read_to_string(&trace).unwrap().lines().next().unwrap()).unwrap();
    assert!(first["round"].as_u64().is_some());
}

#[test]
fn exit_codes() {
    assert_eq!(mincut(&["seq-exact", "--gen", "cycle:5", "--eps", "0"]).status.code(), Some(2));
    assert_eq!(mincut(&["seq-exact"]).status.code(), Some(2));
    assert_eq!(mincut(&["seq-exact", "--gen", "nonsense:3"]).status.code(), Some(2));
    assert_eq!(mincut(&["seq-exact", "--graph", "/definitely/not/here"]).status.code(), Some(2));
    assert_eq!(mincut(&["oracle", "--gen", "cycle:401"]).status.code(), Some(3));
    assert_eq!(mincut(&["dist-exact", "--gen", "cycle:8", "--max-rounds", "3"]).status.code(), Some(4));
}

#[test]
fn oracle_capacity_omits_ratio() {
    let out = mincut(&["one-respect", "--gen", "cycle:450"]);
    assert!(out.status.success());
    let rec = &records(&out)[0];
    assert!(rec.get("ratio").is_none());
    assert!(rec["oracle_note"].as_str().unwrap().contains("capacity"));
    assert_eq!(rec["weight"], 2);
}

#[test]
fn dist_value_within_sandwich() {
    let out = mincut(&["dist-value", "--gen", "planted:5,5,2,1.0", "--eps", "1"]);
    assert!(out.status.success());
    let rec = &records(&out)[0];
    let r = rec["ratio"].as_f64().unwrap();
    assert!((1.0..=1.5).contains(&r), "{r}");
}
