use std::process::{Command, Output};

use qvgr::cluster::{QuantumSeed, SeedJson};
use qvgr::monomial::Site;
use qvgr_cli::QuiverJson;

fn qvgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvgr")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = qvgr(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn cartan_json() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["cartan", "-t", "G2", "--json"])).unwrap();
    assert_eq!(v["coxeter_number"], 6);
    assert_eq!(v["symmetrizer"], serde_json::json!([1, 3]));
    assert_eq!(v["cartan"], serde_json::json!([[2, -3], [-1, 2]]));
}

#[test]
fn pairing_and_btilde() {
    assert_eq!(ok(&["pairing", "-t", "G2", "X[2,5]", "X[1,10]"]).trim(), "-3");
    let out = ok(&["btilde", "-t", "A2", "--i", "1", "--j", "1", "--u-max", "6"]);
    assert_eq!(out.trim(), "1 1 [1, 0, 0, 0, -1, 0]");
}

#[test]
fn characters_print() {
    let f = ok(&["fq", "-t", "G2", "X[1,10]"]);
    assert_eq!(f.lines().count(), 7);
    let dot = ok(&["fq", "-t", "G2", "X[2,5]", "--dot"]);
    assert!(dot.starts_with("digraph"));
    let j: serde_json::Value = serde_json::from_str(&ok(&["kr", "-t", "B3", "--i", "3", "--p", "0", "--s", "0", "--json"])).unwrap();
    assert!(j.is_array() || j.is_object());
    let l = ok(&["lq", "-t", "B3", "X[3,0] X[3,2]"]);
    assert!(l.contains("# "));
}

#[test]
fn tsystem_sweep_passes() {
    let out = ok(&["tsystem", "-t", "G2", "--sweep", "2"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    assert_eq!(qvgr(&["tsystem", "-t", "G2", "--i", "1"]).status.code(), Some(2));
}

#[test]
fn seed_file_round_trip_and_mutation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed.json");
    let text = ok(&["seed", "-t", "B3", "--depth", "3"]);
    std::fs::write(&path, &text).unwrap();
    let j: SeedJson = serde_json::from_str(&text).unwrap();
    let seed = QuantumSeed::from_json(&j).unwrap();
    assert!(seed.is_compatible());

    let p = path.to_str().unwrap();
    let once = ok(&["mutate", "--seed", p, "--at", "(1,0)"]);
    let want = seed.mutate_at(Site::new(1, 0)).unwrap().to_json();
    assert_eq!(serde_json::from_str::<serde_json::Value>(&once).unwrap(), serde_json::to_value(&want).unwrap());

    let seq = dir.path().join("seq.json");
    std::fs::write(&seq, "[[1,0],[1,0]]").unwrap();
    let twice = ok(&["mutate", "--seed", p, "--seq", seq.to_str().unwrap()]);
    let back: SeedJson = serde_json::from_str(&twice).unwrap();
    assert_eq!(back.exchange, j.exchange);
    assert_eq!(back.lambda, j.lambda);
}

#[test]
fn export_quiver_formats() {
    let dot = ok(&["export-quiver", "-t", "G2", "--sink-source", "--depth", "3"]);
    assert!(dot.contains("shape=box") && dot.contains("->"));
    let q: QuiverJson =
        serde_json::from_str(&ok(&["export-quiver", "-t", "G2", "--sink-source", "--depth", "3", "--format", "json"])).unwrap();
    assert_eq!(q.vertices.len(), 6);
    assert_eq!(q.frozen, vec![Site::new(1, -4), Site::new(2, -5)]);
    assert_eq!(q.arrows.len(), dot.matches("->").count());
}

#[test]
fn verify_succeeds() {
    let out = ok(&["verify", "-t", "B3", "--depth", "3"]);
    assert!(!out.contains("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(qvgr(&["bogus"]).status.code(), Some(2));
    assert_eq!(qvgr(&["cartan", "-t", "Q9"]).status.code(), Some(2));
    assert_eq!(qvgr(&["seed", "-t", "B3", "--xi", "0,5,0"]).status.code(), Some(2));
    assert_eq!(qvgr(&["mutate", "-t", "B3", "--depth", "3", "--at", "(7,0)"]).status.code(), Some(2));
    assert_eq!(qvgr(&["mutate", "-t", "B3", "--depth", "3", "--at", "(1,-4)"]).status.code(), Some(2));
    assert_eq!(qvgr(&["mutate", "-t", "B3", "--depth", "3"]).status.code(), Some(2));
    assert_eq!(qvgr(&["seed", "--seed", "/nonexistent/seed.json"]).status.code(), Some(1));
    assert_eq!(qvgr(&["--help"]).status.code(), Some(0));
}
