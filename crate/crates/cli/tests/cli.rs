use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hpomega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpomega")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn omega_of_non_prefix_free_set() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s.txt", "0\n1\n00\n");
    let out = hpomega(&["omega", &f]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert_eq!(r["omega"], "5/4");
    assert_eq!(r["prefix_free"], false);
    assert_eq!(r["witness"]["prefix"], "0");
    assert_eq!(r["witness"]["extension"], "00");
    assert_eq!(r["kraft_holds"], false);
}

#[test]
fn omega_of_prefix_free_set() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "s.txt", "# E\n1\n00\n");
    let out = hpomega(&["omega", &f]);
    let r = &json(&out)["result"];
    assert_eq!(r["omega"], "3/4");
    assert_eq!(r["prefix_free"], true);
    assert_eq!(r["interval_check"]["equal"], true);
    assert_eq!(r["interval_check"]["lhs"], "3/4");
}

#[test]
fn empty_or_garbled_set_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&hpomega(&["omega", &write(dir.path(), "e.txt", "")])), 2);
    assert_eq!(code(&hpomega(&["omega", &write(dir.path(), "g.txt", "01\n0x1\n")])), 2);
    assert_eq!(code(&hpomega(&["omega", "/nonexistent/set.txt"])), 2);
}

#[test]
fn weigh_examples() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.thy", "p0\n!p0\n");
    let v = json(&hpomega(&["weigh", &t, "--weight", "v", "--precision", "10"]));
    assert_eq!(v["result"]["value"]["lower"], "1023/1024");
    assert_eq!(v["result"]["value"]["upper"], "1");
    assert_eq!(v["result"]["value"]["terms_used"], 10);
    let w = json(&hpomega(&["weigh", &t, "--weight", "wincons"]));
    assert_eq!(w["result"]["value"], "1");
    let bad = hpomega(&["weigh", &t, "--weight", "vab", "--a", "2", "--b", "4", "--c", "2"]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("requires c > 3"));
    assert_eq!(code(&hpomega(&["weigh", &t, "--weight", "nope"])), 1);
}

#[test]
fn reports_embed_versions_and_flags() {
    let dir = TempDir::new().unwrap();
    let t = write(dir.path(), "t.thy", "p1 -> p2\n");
    let r = json(&hpomega(&["weigh", &t, "--weight", "w3"]));
    assert_eq!(r["enumeration_version"], "psi-interleaved-shortlex-ladder/1");
    assert_eq!(r["language_version"], "minilang-IDPJE/1");
    assert_eq!(r["flags"]["command"]["weigh"]["weight"]["weight"], "w3");
    assert_eq!(r["result"]["value"], "1");
}

#[test]
fn audit_exit_codes() {
    let dir = TempDir::new().unwrap();
    for (i, t) in ["p0\n", "p1\n", "p0\np1\n", "p0 & p1\n", "p0 | !p0\n", "p2\n!p2\n"].iter().enumerate() {
        write(dir.path(), &format!("t{i:02}.thy"), t);
    }
    let corpus = dir.path().to_str().unwrap();
    for w in ["v", "u", "vab"] {
        let out = hpomega(&["audit", "--corpus-dir", corpus, "--weight", w]);
        assert_eq!(code(&out), 0, "{w}: {}", stdout(&out));
        assert_eq!(json(&out)["result"]["hp_violation_count"], 0);
    }
    for w in ["wincons", "w5"] {
        let out = hpomega(&["audit", "--corpus-dir", corpus, "--weight", w]);
        assert_eq!(code(&out), 3);
        let r = json(&out);
        assert_eq!(r["result"]["hp_violation_count"], 0);
        assert!(r["result"]["ep_violation_count"].as_u64().unwrap() > 0);
    }
    assert_eq!(code(&hpomega(&["audit", "--random", "40", "--weight", "axiom-count"])), 3);
    assert_eq!(code(&hpomega(&["audit", "--weight", "v"])), 1);
}

#[test]
fn census_csv() {
    let out = hpomega(&["census", "--max-chars", "3", "--fuel", "100"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["bit_length,total,halted,fuel", "8,1,1,100", "16,4,4,100", "24,16,15,100"]);
}

#[test]
fn dominance_sweep_is_strict() {
    let out = hpomega(&["dominance", "--measures", "100", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 124);
    assert!(rows.iter().all(|r| r.ends_with(",true,true")), "{text}");
}

#[test]
fn dominance_accepts_measure_files() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", r#"{"kind":"stop-probability","q":"1/2","support":24}"#);
    let out = hpomega(&["dominance", "--measures", "0", "--no-point-mass", "--measure-file", &m, "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["rows"].as_array().unwrap().len(), 1);
    let short = write(dir.path(), "s.json", r#"{"kind":"point-mass","m":8,"support":16}"#);
    assert_eq!(code(&hpomega(&["dominance", "--measures", "0", "--measure-file", &short])), 2);
}

#[test]
fn montecarlo_estimate() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "e.txt", "1\n00\n");
    let r = json(&hpomega(&["montecarlo", &f, "--trials", "10000", "--seed", "1"]));
    assert_eq!(r["result"]["target"], "3/4");
    let hits = r["result"]["hits"].as_u64().unwrap() as f64;
    assert!((hits / 10_000.0 - 0.75).abs() < 0.02);
    let bad = write(dir.path(), "b.txt", "0\n00\n");
    assert_eq!(code(&hpomega(&["montecarlo", &bad])), 2);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "e.txt", "1\n00\n01\n");
    for args in [
        vec!["montecarlo", f.as_str(), "--trials", "5000", "--seed", "9"],
        vec!["dominance", "--measures", "10", "--seed", "3"],
        vec!["audit", "--random", "60", "--seed", "2", "--weight", "v"],
        vec!["klab", "--target", "1"],
    ] {
        assert_eq!(hpomega(&args).stdout, hpomega(&args).stdout, "{args:?}");
    }
}

#[test]
fn enumerate_and_klab() {
    let out = hpomega(&["enumerate", "--count", "5", "--format", "csv"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["index,sentence", "1,⊥", "2,p0", "3,⊤", "4,¬p0", "5,p1"]);
    let k = json(&hpomega(&["klab", "--target", "1,2", "--max-chars", "5"]));
    assert_eq!(k["result"]["bounded_k_bits"], 40);
    let none = json(&hpomega(&["klab", "--target", "1,2"]));
    assert_eq!(none["result"]["bounded_k_bits"], Value::Null);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&hpomega(&["bogus"])), 1);
    assert_eq!(code(&hpomega(&["census", "--fuel", "0"])), 1);
    assert_eq!(code(&hpomega(&["--help"])), 0);
    assert_eq!(code(&hpomega(&["--version"])), 0);
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "e.txt", "1\n");
    assert_eq!(code(&hpomega(&["omega", &f, "--format", "csv"])), 1);
}
