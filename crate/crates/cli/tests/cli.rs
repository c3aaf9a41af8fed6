use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn veronet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veronet"))
        .args(args)
        .env_remove("VERONET_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = veronet(&["construct", "--q", "2", "--n", "1", "--d", "3", "--k", "1", "--out", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let code: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(code["codewords"].as_array().unwrap().len(), 3);
    assert_eq!(code["N"], 4);
    assert_eq!(code["D"], 4);
}

#[test]
fn construct_rejects_k_not_below_d() {
    let out = veronet(&["construct", "--q", "2", "--n", "1", "--d", "3", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn construct_extension_field_to_stdout() {
    let code = json_of(&veronet(&["construct", "--q", "4", "--n", "1", "--d", "2", "--k", "1"]));
    assert_eq!(code["codewords"].as_array().unwrap().len(), 5);
    assert_eq!(code["irreducible"], serde_json::json!([1, 1, 1]));
}

#[test]
fn construct_with_explicit_modulus() {
    let code = json_of(&veronet(&["construct", "--p", "2", "--m", "3", "--irreducible", "1,0,1,1", "--n", "1", "--d", "2", "--k", "1"]));
    assert_eq!(code["q"], 8);
    assert_eq!(code["irreducible"], serde_json::json!([1, 0, 1, 1]));
    let reducible = veronet(&["construct", "--p", "2", "--m", "2", "--irreducible", "1,0,1", "--n", "1", "--d", "2", "--k", "1"]);
    assert_eq!(reducible.status.code(), Some(2));
    let conflict = veronet(&["construct", "--q", "9", "--p", "2", "--n", "1", "--d", "2", "--k", "1"]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn params_examples() {
    let v = json_of(&veronet(&["params", "--q", "2", "--n", "1", "--d", "2", "--k", "1", "--format", "json"]));
    assert_eq!(v["agree"], true);
    let c = &v["constructed"];
    assert_eq!((c["N"].as_u64(), c["dim"].as_u64(), c["size"].as_u64(), c["D"].as_u64()), (Some(3), Some(2), Some(3), Some(2)));
    assert_eq!(c["lambda"], "2/3");
    assert_eq!(c["delta"], "1/2");

    let v = json_of(&veronet(&["params", "--q", "2", "--n", "1", "--d", "3", "--k", "1", "--format", "json"]));
    assert_eq!(v["constructed"]["D"], 4);
    assert_eq!(v["constructed"]["delta"], "1");

    let v = json_of(&veronet(&["params", "--q", "3", "--n", "2", "--d", "2", "--k", "1", "--format", "json"]));
    assert_eq!(v["constructed"]["size"], 13);
    assert_eq!(v["predicted"], v["constructed"]);
}

#[test]
fn params_table_lists_both_columns() {
    let out = veronet(&["params", "--q", "2", "--n", "1", "--d", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("predicted") && text.contains("constructed"));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["lambda", "2/3", "2/3"]));
}

#[test]
fn verify_single_tuple() {
    let v = json_of(&veronet(&["verify", "--q", "2", "--n", "1", "--d", "2", "--k", "1", "--format", "json"]));
    assert_eq!(v["all_passed"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_default_grid_passes_in_tuple_order() {
    let v = json_of(&veronet(&["verify", "--format", "json"]));
    assert_eq!(v["all_passed"], true);
    let rows = v["rows"].as_array().unwrap();
    // q in {2,3,4,5}, n in {1,2}, d in {2,3,4} with 1 <= k < d: 4 * 2 * 6
    assert_eq!(rows.len(), 48);
    let keys: Vec<(u64, u64, u64, u64)> = rows
        .iter()
        .map(|r| (r["q"].as_u64().unwrap(), r["n"].as_u64().unwrap(), r["d"].as_u64().unwrap(), r["k"].as_u64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
    let last = rows.last().unwrap();
    assert_eq!((last["observed"]["N"].as_u64(), last["observed"]["dim"].as_u64(), last["observed"]["size"].as_u64()), (Some(15), Some(10), Some(31)));
}

#[test]
fn verify_malformed_grid_is_usage_error() {
    for args in [
        &["verify", "--q", "2,x"][..],
        &["verify", "--q", "6"],
        &["verify", "--d", "2", "--k", "5"],
        &["verify", "--format", "yaml"],
    ] {
        assert_eq!(veronet(args).status.code(), Some(2), "{args:?}");
    }
}

fn write_space(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn distance_examples_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let e1 = write_space(dir.path(), "e1", "3 2 1\n1 0 0\n");
    let e2 = write_space(dir.path(), "e2", "3 2 1\n0 1 0\n");
    let e12 = write_space(dir.path(), "e12", "3 2 2\n1 0 0\n0 1 0\n");
    let e23 = write_space(dir.path(), "e23", "3 2 2\n0 1 0\n0 0 1\n");
    let zero = write_space(dir.path(), "zero", "3 2 0\n");
    let dist = |a: &str, b: &str| json_of(&veronet(&["distance", a, b, "--format", "json"]))["distance"].as_u64().unwrap();
    assert_eq!(dist(&e1, &e2), 2);
    assert_eq!(dist(&e12, &e23), 2);
    assert_eq!(dist(&e12, &e12), 0);
    assert_eq!(dist(&zero, &e12), 2);
}

#[test]
fn distance_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_space(dir.path(), "a", "3 2 1\n1 0 0\n");
    let b = write_space(dir.path(), "b", "4 2 1\n1 0 0 0\n");
    let junk = write_space(dir.path(), "junk", "hello\n");
    assert_eq!(veronet(&["distance", &a, &b]).status.code(), Some(2));
    assert_eq!(veronet(&["distance", &a, &junk]).status.code(), Some(2));
    let missing = dir.path().join("missing");
    assert_eq!(veronet(&["distance", &a, path_str(&missing)]).status.code(), Some(2));
}

fn sim(extra: &[&str]) -> Value {
    let mut args = vec!["simulate", "--format", "json"];
    args.extend_from_slice(extra);
    json_of(&veronet(&args))
}

#[test]
fn simulate_examples() {
    let v = sim(&["--q", "2", "--n", "1", "--d", "3", "--k", "1", "--trials", "100"]);
    assert_eq!((v["trials"].as_u64(), v["correct"].as_u64()), (Some(100), Some(100)));

    let v = sim(&["--q", "2", "--n", "1", "--d", "3", "--k", "1", "--erasures", "1", "--trials", "300", "--seed", "7"]);
    assert_eq!(v["correct"], 300);
    assert_eq!(v["success_rate"], 1.0);

    let v = sim(&["--q", "2", "--n", "1", "--d", "2", "--k", "1", "--erasures", "1", "--trials", "300", "--seed", "7"]);
    assert!(v["ambiguous"].as_u64().unwrap() > 0);
    assert!(v["correct"].as_u64().unwrap() < 300);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6);
    for key in ["config", "trials", "correct", "wrong", "ambiguous", "success_rate"] {
        assert!(keys.contains(&key), "{key}");
    }
}

#[test]
fn simulate_from_code_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let built = veronet(&["construct", "--q", "3", "--n", "1", "--d", "3", "--k", "1", "--out", path_str(&path)]);
    assert_eq!(built.status.code(), Some(0));
    let from_file = sim(&["--code", path_str(&path), "--errors", "1", "--trials", "50", "--seed", "11"]);
    let from_flags = sim(&["--q", "3", "--n", "1", "--d", "3", "--k", "1", "--errors", "1", "--trials", "50", "--seed", "11"]);
    assert_eq!(from_file, from_flags);
    assert_eq!(from_file["correct"], 50);
}

#[test]
fn simulate_seed_from_environment_and_flag_wins() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_veronet"));
        cmd.args(["simulate", "--q", "2", "--n", "1", "--d", "2", "--k", "1", "--erasures", "1", "--trials", "60"]);
        cmd.env_remove("VERONET_SEED");
        if let Some(s) = env {
            cmd.env("VERONET_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        json_of(&cmd.output().unwrap())
    };
    assert_eq!(run(Some("5"), None)["config"]["seed"], 5);
    assert_eq!(run(Some("5"), Some("9"))["config"]["seed"], 9);
    assert_eq!(run(None, None)["config"]["seed"], 0);
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
}

#[test]
fn simulate_infeasible_config_is_usage_error() {
    let base = ["simulate", "--q", "2", "--n", "1", "--d", "2", "--k", "1"];
    let with = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        veronet(&args).status.code()
    };
    assert_eq!(with(&["--erasures", "3"]), Some(2));
    assert_eq!(with(&["--errors", "2"]), Some(2));
    assert_eq!(with(&["--trials", "0"]), Some(2));
    assert_eq!(veronet(&["simulate", "--q", "2"]).status.code(), Some(2));
}
