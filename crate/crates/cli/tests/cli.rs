use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orthoforms::genus::GenusData;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orthoforms-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthoforms"))
        .args(args)
        .env("ORTHOFORMS_CACHE", cache)
        .output()
        .unwrap()
}

fn json(cache: &Path, args: &[&str]) -> Value {
    let out = run(cache, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn gram(name: &str) -> String {
    fixture(&format!("lattices/{name}.json")).display().to_string()
}

#[test]
fn genus_cache_round_trip() {
    let dir = scratch_dir("genus");
    let v = json(&dir, &["genus", "--lattice", "A2"]);
    assert_eq!(v["class_number"], 1);
    let path = dir.join("A2.json");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(GenusData::from_json(&text).unwrap().to_json(), text);
    let again = json(&dir, &["genus", "--lattice", "A2"]);
    assert_eq!(again, v);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    let out = dir.join("copy.json");
    let summary = json(&dir, &["genus", "--lattice", "A2", "--name", "a2", "--out", out.to_str().unwrap()]);
    assert_eq!(summary["class_number"], 1);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
    assert!(dir.join("copy.json.manifest.json").is_file());
}

#[test]
fn d1369_eigenforms_and_checks() {
    let dir = scratch_dir("d1369");
    json(&dir, &["genus", "--gram", &gram("d1369_1"), "--name", "d1369"]);
    let v = json(&dir, &["eigen", "--genus", "d1369", "--primes", "2,3"]);
    let mut forms: Vec<Vec<i64>> = v["eigenforms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["vector"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect())
        .collect();
    forms.sort();
    assert_eq!(forms.len(), 4);
    // classes are stored in canonical order, so compare as sets up to a permutation of coordinates
    let mut sizes: Vec<usize> = forms.iter().map(|f| f.iter().filter(|&&x| x != 0).count()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 4, 4, 4]);
    let v = json(&dir, &["verify", "--genus", "d1369", "--primes", "2,3,5"]);
    assert_eq!(v["ok"], true);
    let v = json(&dir, &["lpoly4", "--genus", "d1369", "--form", "1,1,1,1", "--p", "2"]);
    assert_eq!(v["lambda1"], "9");
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-9", "28", "-36", "16"]));

    let pair = forms.iter().find(|f| f.iter().filter(|&&x| x != 0).count() == 2).unwrap();
    let pair = pair.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    let table = fixture("ap/37.2.a.a.txt").display().to_string();
    let args = ["verify", "--genus", "d1369", "--primes", "2,3,5", "--form", &pair, "--family", "sym2-depth1", "--ap", &table];
    let v = json(&dir, &args);
    assert_eq!(v["ok"], true);
    assert_eq!(v["lambdas"]["2"], "4/1");
    let v = json(&dir, &["verify", "--genus", "d1369", "--primes", "2,3", "--form", "1,1,1,1", "--family", "eisenstein"]);
    assert_eq!(v["ok"], true);
    let out = run(&dir, &["verify", "--genus", "d1369", "--primes", "2,3", "--form", "1,1,1,1", "--family", "sym2-depth1", "--ap", &table]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rank16_eigenvalue_and_congruence() {
    let dir = scratch_dir("r16");
    json(&dir, &["genus", "--lattice", "E8+E8", "--name", "r16"]);
    let v = json(&dir, &["--orbit-mode", "eigenvalue", "--genus", "r16", "--form", "405,-286", "--p", "2", "--k", "1"]);
    assert_eq!(v["value"], "1800/1");
    let v = json(&dir, &["--orbit-mode", "congruence", "--genus", "r16", "--forms", "0,1", "--primes", "2"]);
    let m = v["moduli"].as_array().unwrap().iter().find(|m| m["q"] == "691").unwrap();
    assert_eq!(m["witness"], serde_json::json!([286, 1]));
    assert_eq!(m["small"], false);
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let dir = scratch_dir("workers");
    json(&dir, &["genus", "--gram", &gram("d39"), "--name", "d39"]);
    let a = run(&dir, &["--workers", "1", "hecke", "--genus", "d39", "--p", "2"]);
    let b = run(&dir, &["--workers", "3", "hecke", "--genus", "d39", "--p", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = run(&dir, &["--workers", "1", "theta", "--lattice", "D4", "--g", "2", "--bound", "3"]);
    let b = run(&dir, &["--workers", "2", "theta", "--lattice", "D4", "--g", "2", "--bound", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn manifest_beside_output() {
    let dir = scratch_dir("manifest");
    let out = dir.join("theta.json");
    json(&dir, &["theta", "--lattice", "A2", "--g", "2", "--bound", "3", "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("theta.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "theta");
    let digest = m["outputs_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    let other = dir.join("again.json");
    json(&dir, &["theta", "--lattice", "A2", "--g", "2", "--bound", "3", "--out", other.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&other).unwrap(), text);
    let m2: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("again.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m2["outputs_digest"], digest);
}

#[test]
fn errors_exit_nonzero() {
    let dir = scratch_dir("errors");
    let out = run(&dir, &["hecke", "--genus", "missing", "--p", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthoforms genus"));
    json(&dir, &["genus", "--lattice", "A2"]);
    assert!(!run(&dir, &["hecke", "--genus", "A2", "--p", "3"]).status.success());
    assert!(!run(&dir, &["eigenvalue", "--genus", "A2", "--form", "x", "--p", "2"]).status.success());
    assert!(!run(&dir, &["--workers", "0", "bench", "--suite", "empty"]).status.success());
    assert!(!run(&dir, &["bench", "--suite", "nope"]).status.success());
    assert!(!run(&dir, &["theta", "--lattice", "A2", "--g", "3", "--bound", "2"]).status.success());
    assert!(run(&dir, &["theta", "--lattice", "A2", "--g", "3", "--bound", "2", "--allow-g3"]).status.success());
    assert!(!run(&dir, &["theta", "--lattice", "A2", "--g", "4", "--allow-g3"]).status.success());
}

#[test]
fn bench_suites() {
    let dir = scratch_dir("bench");
    let v = json(&dir, &["bench", "--suite", "empty"]);
    assert!(v["rows"].as_array().unwrap().is_empty());
    let v = json(&dir, &["bench", "--suite", "d39"]);
    let timed: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["form"] == "all")
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!(timed, vec![2, 5, 7]);
}

#[test]
fn depth_and_census() {
    let dir = scratch_dir("depth");
    json(&dir, &["genus", "--gram", &gram("d1369_1"), "--name", "d1369"]);
    let v = json(&dir, &["depth", "--genus", "d1369", "--form", "1,1,1,1", "--gmax", "1", "--bounds", "6"]);
    assert_eq!(v["depth"], 0);
    let fixture = fixture("rank6_prime_discriminants.json");
    let v = json(
        &dir,
        &["conjecture12", "--fixture", fixture.to_str().unwrap(), "--max-d", "31", "--bound1", "10", "--bound2", "4"],
    );
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["kernel2_dimension"] == 0));
    json(&dir, &["genus", "--gram", &gram("d131"), "--name", "d131"]);
    let v = json(&dir, &["conjecture12", "--genus", "d131", "--bound1", "20", "--bound2", "4"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["discriminant"], 131);
    assert_eq!(rows[0]["kernel1_dimension"], 1);
}
