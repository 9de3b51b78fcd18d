use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn turanlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turanlab"))
        .current_dir(dir)
        .env_remove("TURANLAB_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

const K4: &str = "4 2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";

#[test]
fn search_caches_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["search", "--n", "6", "--r", "3", "--predicate", "cancellative"];
    let first = turanlab(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let rec = json(&first);
    assert_eq!(rec["value"], 8);
    assert_eq!(rec["extremal_classes"], 1);
    assert!(dir.path().join("turanlab-cache.jsonl").exists());

    let second = turanlab(dir.path(), &args);
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));

    let forced = turanlab(dir.path(), &[&args[..], &["--force"]].concat());
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(forced.stdout, first.stdout);

    let lookup = turanlab(
        dir.path(),
        &["cache", "lookup", "--n", "6", "--r", "3", "--predicate", "cancellative"],
    );
    assert_eq!(lookup.stdout, first.stdout);
    let list = json(&turanlab(dir.path(), &["cache", "list"]));
    assert_eq!(list.as_array().unwrap().len(), 1);
}

#[test]
fn forced_rerun_against_a_tampered_cache_aborts() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("store.jsonl");
    let cache_arg = cache.to_str().unwrap();
    let args = ["search", "--n", "5", "--r", "2", "--predicate", "triangle-free", "--cache", cache_arg];
    assert_eq!(turanlab(dir.path(), &args).status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap();
    std::fs::write(&cache, text.replace("\"value\":6", "\"value\":7")).unwrap();

    let hit = json(&turanlab(dir.path(), &args));
    assert_eq!(hit["value"], 7);
    let forced = turanlab(dir.path(), &[&args[..], &["--force"]].concat());
    assert_eq!(forced.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&forced.stderr).contains("disagrees"));
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_turanlab"))
        .current_dir(dir.path())
        .env("TURANLAB_CACHE", dir.path().join("env.jsonl"))
        .args(["search", "--n", "4", "--r", "2", "--predicate", "triangle-free"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("env.jsonl").exists());
    assert!(!dir.path().join("turanlab-cache.jsonl").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    assert_eq!(turanlab(dir.path(), &["verify", "fisher-ryan", &k4, "--ell", "3"]).status.code(), Some(2));
    assert_eq!(turanlab(dir.path(), &["verify", "fisher-ryan", &k4, "--ell", "4"]).status.code(), Some(0));
    assert_eq!(turanlab(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(turanlab(dir.path(), &["verify", "no-such-check", &k4]).status.code(), Some(2));
    assert_eq!(turanlab(dir.path(), &["verify", "theorem13", "missing.txt"]).status.code(), Some(2));

    let bad = write(dir.path(), "bad.txt", "5 3\n1 2 3\n1 2 4\n3 4 5\n");
    let out = turanlab(dir.path(), &["verify", "cancellative", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["holds"], false);
    assert_eq!(turanlab(dir.path(), &["verify", "theorem13", &bad]).status.code(), Some(2));

    let budget = turanlab(
        dir.path(),
        &["search", "--n", "7", "--r", "3", "--predicate", "cancellative", "--budget", "10", "--no-cache"],
    );
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));
}

#[test]
fn construct_then_verify_and_extract() {
    let dir = tempfile::tempdir().unwrap();
    let t = turanlab(dir.path(), &["construct", "turan", "--n", "9", "--r", "3", "--ell", "3"]);
    let t9 = write(dir.path(), "t9.txt", &String::from_utf8(t.stdout).unwrap());
    let rep = json(&turanlab(dir.path(), &["verify", "theorem13", &t9]));
    assert_eq!(rep["holds"], true);
    assert_eq!(rep["quantities"]["z"]["exact"], "1/2");

    let p = ["construct", "perturb", &t9, "--fraction", "0.1", "--seed", "7"];
    let a = turanlab(dir.path(), &p);
    assert_eq!(a.stdout, turanlab(dir.path(), &p).stdout);
    let perturbed = write(dir.path(), "p.txt", &String::from_utf8(a.stdout).unwrap());
    let rep = json(&turanlab(dir.path(), &["stability", "kfree", &perturbed, "--ell", "3", "--json"]));
    assert_eq!(rep["edges"], 25);
    assert_eq!(rep["bad_edges"], 0);
    let rep = json(&turanlab(dir.path(), &["stability", "cancellative", &t9, "--json"]));
    assert_eq!(rep["delta"], 0.0);
    assert!(rep["witness_chain"]["t"].is_array());

    assert_eq!(turanlab(dir.path(), &["construct", "perturb", &t9, "--fraction", "0.1"]).status.code(), Some(2));
}

#[test]
fn randomized_constructions_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let no_seed = turanlab(dir.path(), &["construct", "triangle-free", "--n", "10", "--epsilon", "0.02"]);
    assert_eq!(no_seed.status.code(), Some(2));
    let args = ["construct", "triangle-free", "--n", "10", "--epsilon", "0.02", "--seed", "3", "--json"];
    let a = turanlab(dir.path(), &args);
    assert_eq!(a.stdout, turanlab(dir.path(), &args).stdout);
    assert_eq!(json(&a)["parameters"]["seed"], 3);
    let scan = turanlab(dir.path(), &["scan", "triangle-free", "--n", "20", "--grid", "0.02"]);
    assert_eq!(scan.status.code(), Some(2));
}

#[test]
fn scan_emits_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan", "cancellative", "--n", "15,30", "--grid", "0,0.03", "--seed", "0", "--seeds", "5"];
    let a = turanlab(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,seed,epsilon,delta,bad_edges,case"));
    assert_eq!(lines.clone().count(), 20);
    assert!(lines.next().unwrap().starts_with("15,0,0,0,0,"));
    assert_eq!(turanlab(dir.path(), &args).stdout, a.stdout);
    let four = turanlab(dir.path(), &[&args[..], &["--threads", "4"]].concat());
    assert_eq!(four.stdout, a.stdout);

    let tf = turanlab(dir.path(), &["scan", "triangle-free", "--n", "20", "--grid", "0.01,0.02,0.04", "--seed", "1"]);
    assert_eq!(tf.status.code(), Some(0));
    assert_eq!(String::from_utf8(tf.stdout).unwrap().lines().count(), 4);
}

#[test]
fn manifest_goes_to_stderr_with_digests() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let out = turanlab(dir.path(), &["verify", "fisher-ryan", &k4, "--ell", "4", "--manifest"]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: Value = serde_json::from_slice(&out.stderr).unwrap();
    let digest = turanlab::manifest::sha256_hex(K4.as_bytes());
    assert_eq!(manifest["inputs"]["k4.txt"], digest.as_str());
    assert_eq!(
        manifest["outputs"]["stdout"],
        turanlab::manifest::sha256_hex(&out.stdout).as_str()
    );
    assert!(serde_json::from_slice::<Value>(&out.stdout).is_ok());
}

#[test]
fn bipartite_report_on_c5() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.txt", "5 2\n1 2\n2 3\n3 4\n4 5\n1 5\n");
    let out = turanlab(dir.path(), &["stability", "bipartite", &c5, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["bad_count"], 1);
    assert_eq!(rep["all_hold"], true);
    let text = turanlab(dir.path(), &["stability", "bipartite", &c5]);
    assert!(!String::from_utf8(text.stdout).unwrap().contains("FAIL"));
}
