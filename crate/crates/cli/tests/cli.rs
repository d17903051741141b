use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use hyperdense::colour::{verify_witness, ShadowColouring};
use hyperdense::ternary::{verify_embedding, EmbeddingWitness};
use hyperdense::Hypergraph;
use serde_json::Value;
use tempfile::TempDir;

const C5_MINUS: &str = "3 5 4\n0 1 2\n1 2 3\n2 3 4\n0 3 4\n";
const K4: &str = "3 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n";
const EDGE: &str = "3 3 1\n0 1 2\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn hyperdense(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperdense")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_pi1_exit_codes_and_witness() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.hyg", C5_MINUS);
    let run = hyperdense(&["decide-pi1", s(&c5)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = run.json();
    assert_eq!(report["schema"], "hyperdense.report/1");
    assert_eq!(report["config"]["command"]["name"], "decide-pi1");
    assert_eq!(report["config"]["seed"], 0);
    let w = ShadowColouring::from_json(&report["result"]["witness"], 3).unwrap();
    assert!(verify_witness(&Hypergraph::parse_hyg(C5_MINUS).unwrap(), &w));

    let k4 = write(&dir, "k4.hyg", K4);
    let run = hyperdense(&["decide-pi1", s(&k4)]);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["result"]["outcome"], "none");

    let edgeless = write(&dir, "empty.hyg", "3 4 0\n");
    assert_eq!(hyperdense(&["decide-pi1", s(&edgeless)]).code, 0);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.hyg", "3 4 1\n0 1 9\n");
    let run = hyperdense(&["decide-pi1", s(&bad)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);
    assert_eq!(hyperdense(&["frequent", "/nonexistent/file.hyg"]).code, 2);
    assert_eq!(hyperdense(&["no-such-command"]).code, 2);
    let edge = write(&dir, "edge.hyg", EDGE);
    assert_eq!(hyperdense(&["audit", "vertex", s(&edge)]).code, 2);
}

#[test]
fn frequent_witnesses_verify() {
    let dir = TempDir::new().unwrap();
    let edge = write(&dir, "edge.hyg", EDGE);
    let run = hyperdense(&["frequent", s(&edge)]);
    assert_eq!(run.code, 0);
    let w = EmbeddingWitness::from_json(&run.json()["result"]["witness"], 3).unwrap();
    assert!(verify_embedding(&Hypergraph::parse_hyg(EDGE).unwrap(), &w));
    let k4 = write(&dir, "k4.hyg", K4);
    assert_eq!(hyperdense(&["frequent", s(&k4)]).code, 1);
    let c5 = write(&dir, "c5.hyg", C5_MINUS);
    assert_eq!(hyperdense(&["frequent", s(&c5)]).code, 1);
}

#[test]
fn generate_files() {
    let run = hyperdense(&["generate", "ternary", "--n", "2"]);
    assert_eq!(run.code, 0);
    let t2 = Hypergraph::parse_hyg(&run.stdout).unwrap();
    assert_eq!((t2.vertex_count(), t2.edge_count()), (9, 30));

    let dir = TempDir::new().unwrap();
    let phi = write(&dir, "phi.txt", "3 3\n0 1 3\n0 2 2\n1 2 1\n");
    let run = hyperdense(&["generate", "hphi", "--colouring", s(&phi)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(Hypergraph::parse_hyg(&run.stdout).unwrap().edge_count(), 1);

    let a = hyperdense(&["generate", "hphi", "--n", "20", "--seed", "7"]).stdout;
    let b = hyperdense(&["generate", "hphi", "--n", "20", "--seed", "7"]).stdout;
    let c = hyperdense(&["generate", "hphi", "--n", "20", "--seed", "8"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("# hphi k=3 n=20 seed=7"));
}

#[test]
fn audit_verdicts() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.hyg", "3 10 0\n");
    let run = hyperdense(&["audit", "vertex", s(&empty), "--d", "0.5", "--eta", "0.01"]);
    assert_eq!(run.code, 1);
    let r = run.json()["result"].clone();
    assert_eq!(r["verdict"], "violated");
    assert_eq!(r["certificate"]["U"].as_array().unwrap().len(), 10);
    assert!((r["slack"].as_f64().unwrap() + 50.0).abs() < 1e-9);

    let complete = Hypergraph::complete(3, 8).unwrap().to_hyg();
    let complete = write(&dir, "k8.hyg", &complete);
    let run = hyperdense(&["audit", "triple", s(&complete), "--d", "0.5", "--eta", "0.05"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["result"]["verdict"], "satisfied");
    let run = hyperdense(&["audit", "vertex", s(&complete), "--d", "0.9", "--eta", "0.01", "--mode", "heuristic"]);
    assert_eq!(run.code, 3);
    assert_eq!(run.json()["result"]["verdict"], "unresolved");

    let t2 = write(&dir, "t2.hyg", &hyperdense(&["generate", "ternary", "--n", "2"]).stdout);
    let run = hyperdense(&["audit", "profile", s(&t2), "--eta-grid", "1"]);
    assert_eq!(run.code, 0);
    let value = run.json()["result"]["entries"][0]["value"].as_f64().unwrap();
    assert!((value - 30.0 / 84.0).abs() < 1e-12);
}

#[test]
fn thread_cap_does_not_change_reports() {
    let dir = TempDir::new().unwrap();
    let t2 = write(&dir, "t2.hyg", &hyperdense(&["generate", "ternary", "--n", "2"]).stdout);
    let strip = |run: Run| {
        let mut v = run.json();
        v["config"]["threads"] = Value::Null;
        v
    };
    for args in [
        vec!["audit", "triple", s(&t2), "--d", "0.3", "--eta", "0.001", "--mode", "heuristic", "--seed", "11"],
        vec!["audit", "vertex", s(&t2), "--d", "0.6", "--eta", "0.001", "--mode", "heuristic", "--seed", "11"],
        vec!["audit-tn", "--level", "3", "--mode", "sampled", "--samples", "50000", "--seed", "2"],
    ] {
        let one = strip(hyperdense(&[&["--threads", "1"], &args[..]].concat()));
        let four = strip(hyperdense(&[&["--threads", "4"], &args[..]].concat()));
        assert_eq!(one, four, "{args:?}");
    }
}

#[test]
fn sweep_counts() {
    let run = hyperdense(&["sweep", "--f", "3"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["result"]["rows"].as_array().unwrap().len(), 2);

    let r = hyperdense(&["sweep", "--f", "4"]).json()["result"].clone();
    assert_eq!(r["patterns"], 16);
    assert_eq!(r["counts"]["frequent_only"], 0);
    assert_eq!(r["counts"]["frequent_and_condition_b"], 11);
    let failing: Vec<_> = r["rows"].as_array().unwrap().iter().filter(|row| row["condition_b"] == false).collect();
    assert_eq!(failing.len(), 5);
    assert!(failing.iter().all(|row| row["edges"].as_array().unwrap().len() >= 3));

    let run = hyperdense(&["sweep", "--f", "5"]);
    assert_eq!(run.code, 0);
    let c = &run.json()["result"]["counts"];
    assert_eq!(
        [&c["frequent_and_condition_b"], &c["neither"], &c["condition_b_only"], &c["frequent_only"]],
        [181, 783, 60, 0]
    );
}

#[test]
fn reduced_round_trip() {
    let dir = TempDir::new().unwrap();
    let a = hyperdense(&["reduced", "random", "--m", "7", "--size", "3", "--p", "1", "--mu", "1"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let inst = write(&dir, "a.json", &a.stdout);
    let sel = dir.path().join("sel.json");
    let run = hyperdense(&["reduced", "select", s(&inst), "--mu", "1", "--f", "7", "-o", s(&sel)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let run = hyperdense(&["reduced", "verify", s(&inst), "--selection", s(&sel)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["result"]["outcome"], true);

    let sparse = hyperdense(&["reduced", "random", "--m", "6", "--size", "2", "--p", "0.3", "--mu", "0.9"]);
    assert_eq!(sparse.code, 2);
}

#[test]
fn inequality_reports() {
    let scan = hyperdense(&["verify-fact7", "--resolution", "51"]);
    assert_eq!(scan.code, 0);
    assert!(scan.json()["result"]["min"].as_f64().unwrap() >= -1e-9);

    let tn = hyperdense(&["audit-tn", "--level", "2"]);
    assert_eq!(tn.code, 0);
    assert_eq!(tn.json()["result"]["examined"], 512);
    assert_eq!(hyperdense(&["audit-tn", "--level", "3"]).code, 2);

    let opt = hyperdense(&["optimality", "--r", "1", "--n", "3"]).json();
    assert_eq!(opt["result"]["edges"], "60");

    let dir = TempDir::new().unwrap();
    let edge = write(&dir, "edge.hyg", EDGE);
    let k4 = write(&dir, "k4.hyg", K4);
    let sup = hyperdense(&["supersat", "--file", s(&edge), "--nmax", "3"]).json();
    let homs: Vec<&str> = sup["result"]["rows"].as_array().unwrap().iter().map(|r| r["hom"].as_str().unwrap()).collect();
    assert_eq!(homs, ["6", "180", "4914"]);
    assert_eq!(hyperdense(&["supersat", "--file", s(&k4)]).code, 1);
}

#[test]
fn hom_count_and_embed() {
    let dir = TempDir::new().unwrap();
    let edge = write(&dir, "edge.hyg", EDGE);
    let k4 = write(&dir, "k4.hyg", K4);
    let c5 = write(&dir, "c5.hyg", C5_MINUS);
    let run = hyperdense(&["hom-count", s(&edge), s(&k4)]);
    assert_eq!(run.json()["result"]["count"], "24");
    let run = hyperdense(&["hom-count", s(&k4), s(&k4), "--injective"]);
    assert_eq!(run.json()["result"]["count"], "24");

    let run = hyperdense(&["embed", s(&edge), s(&c5)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["result"]["map"].as_array().unwrap().len(), 3);
    assert_eq!(hyperdense(&["embed", s(&k4), s(&c5)]).code, 1);
}
