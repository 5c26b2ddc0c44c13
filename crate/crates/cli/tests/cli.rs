use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use ugw_core::config_model::has_cycle_leq;
use ugw_core::io::{read_colored_graph, read_degree_sequence};
use ugw_core::Graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ugw-ldp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn value(out: &Output) -> f64 {
    json(out)["value"].as_f64().expect("finite value")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const REGULAR_3: &str = "1 8\n3\n3\n3\n3\n3\n3\n3\n3\n";
const BIREGULAR_LAW: &str = r#"{"depth": 2, "mode": "rational", "support": [
    {"class": "((()())(()()))", "p": "3/5"},
    {"class": "((())(())(()))", "p": "2/5"}]}"#;

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let law = write(dir.path(), "p.json", BIREGULAR_LAW);
    let args = ["sample-ugw", "--law", &law, "--depth", "4", "--count", "5", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["schema"], "ugw-ldp/v1");
    assert_eq!(doc["trees"].as_array().unwrap().len(), 5);

    let d = write(dir.path(), "d.txt", REGULAR_3);
    let cycles = ["experiment", "cycles", "--n-list", "50,100", "--samples", "20", "--seed", "3"];
    assert_eq!(run(&cycles).stdout, run(&cycles).stdout);
    let one = [&["--threads", "1"][..], &cycles[..]].concat();
    let three = [&["--threads", "3"][..], &cycles[..]].concat();
    assert_eq!(run(&one).stdout, run(&three).stdout);
    let cm = ["sample-cm", "--degrees", &d, "--seed", "11"];
    assert_eq!(run(&cm).stdout, run(&cm).stdout);
}

#[test]
fn gdh_sample_has_no_short_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.txt", REGULAR_3);
    for seed in 0..5 {
        let out = run(&["sample-gdh", "--degrees", &d, "--girth", "3", "--seed", &seed.to_string(), "--format", "csv"]);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("u,v,i,j,mult"));
        let mut edges = Vec::new();
        for line in lines {
            let f: Vec<usize> = line.split(',').map(|x| x.parse().unwrap()).collect();
            edges.extend(std::iter::repeat_n((f[0], f[1]), f[4]));
        }
        let g = Graph::from_edges(8, &edges);
        assert!(!has_cycle_leq(&g, 2));
        assert!((0..8).all(|v| g.degree(v) == 3));
    }
}

#[test]
fn out_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.txt", REGULAR_3);
    let graph = dir.path().join("g.txt");
    let out = run(&["sample-cm", "--degrees", &d, "--out", graph.to_str().unwrap()]);
    let meta = json(&out);
    assert_eq!(meta["parameters"]["degrees"]["n"], 8);
    let g = read_colored_graph(&fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(g.degree_sequence(), read_degree_sequence(REGULAR_3).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write(dir.path(), "odd.txt", "1 3\n3\n3\n3\n");
    assert_eq!(code(&run(&["sample-cm", "--degrees", &odd])), 1);
    assert_eq!(code(&run(&["sample-cm"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["entropy", "disc-bound", "--p1", "1:1", "--p2", "3:1"])), 3);
    assert_eq!(code(&run(&["entropy", "jh", "--q", "2:1/2"])), 3);
    // K4 is the only simple 3-regular graph on 4 vertices and it has triangles.
    let k4 = write(dir.path(), "k4.txt", "1 4\n3\n3\n3\n3\n");
    let out = run(&["sample-gdh", "--degrees", &k4, "--girth", "4", "--max-attempts", "200"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn entropy_values() {
    let s2 = ugw_core::entropy::s(2.0).unwrap();
    assert!((value(&run(&["entropy", "sigma-ugw1", "--poisson", "2"])) - s2).abs() < 1e-9);

    let j = json(&run(&["entropy", "jh", "--q", "3:1"]));
    assert!((j["value"].as_f64().unwrap() + 1.6437).abs() < 1e-3);
    assert_eq!(j["terms"]["h"], 1);

    let r = value(&run(&["entropy", "rate-binomial", "--q-poisson", "2", "--lambda", "2"]));
    assert!(r.abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let law = write(dir.path(), "p.json", BIREGULAR_LAW);
    let jh = value(&run(&["entropy", "jh", "--law", &law]));
    let bound = value(&run(&["entropy", "disc-bound", "--p1", "2:1", "--p2", "3:1"]));
    assert!((jh - bound).abs() < 1e-12);

    let delta = json(&run(&["entropy", "delta", "--law", &law]));
    let d2 = delta["deltas"][1].as_f64().unwrap();
    assert!((d2 - 1.2 * 2f64.ln()).abs() < 1e-12);

    let off = run(&["entropy", "rate-degrees", "--q", "2:1", "--p", "3:1"]);
    assert_eq!(json(&off)["value"], "+inf");
}

#[test]
fn verify_passes_and_catches_fault() {
    let ok = run(&["verify", "--quick"]);
    assert_eq!(code(&ok), 0);
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().count() >= 5 && text.lines().all(|l| l.starts_with("PASS")));

    let bad = run(&["verify", "--quick", "--inject-fault"]);
    assert_ne!(code(&bad), 0);
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL cm fiber"));
}
