use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermirror"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env_remove("HYPERMIRROR_CACHE")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (TempDir, Output) {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), args);
    (dir, out)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let (_dir, out) = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn assert_schema(name: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| e.to_string()).collect(),
    };
    assert!(msgs.is_empty(), "{name}: {msgs:?}");
}

#[test]
fn polytope_census() {
    let v = json(&["polytope", "hypercube", "census"]);
    assert_eq!(v["by_dim"], serde_json::json!([16, 32, 24, 8, 1]));
    assert_eq!(v["total"], 81);
    let v = json(&["polytope", "cross", "census"]);
    assert_eq!(v["by_dim"][0], 8);
    assert_eq!(v["total"], 9);
    let v = json(&["polytope", "hypercube", "faces"]);
    assert_eq!(v["f_vector"], serde_json::json!([16, 32, 24, 8]));
    let v = json(&["polytope", "cross", "info"]);
    assert_eq!(v["double_dual_identity"], true);
    assert_eq!(v["root_count"], 0);
    assert_eq!(v["deformation_defect"], 0);
}

#[test]
fn usage_errors_exit_one() {
    let (_d, out) = run(&["polytope", "dodecahedron", "census"]);
    assert_eq!(out.status.code(), Some(1));
    let (_d, out) = run(&["sections", "singular-scan", "--section", "s_2_2"]);
    assert_eq!(out.status.code(), Some(1));
    let (_d, out) = run(&["sections", "fixed-locus", "--element", "q"]);
    assert_eq!(out.status.code(), Some(1));
    let (_d, out) = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fan_commands() {
    let v = json(&["fan", "build-flag"]);
    assert_schema("fan.json", &v);
    assert_eq!((v["cones"].as_u64(), v["rays"].as_u64()), (Some(384), Some(80)));
    assert_eq!(v["smooth"], true);
    let v = json(&["fan", "check", "--invariance", "b4"]);
    assert_eq!(v["invariant"], true);
    assert_eq!(v["group_order"], 384);
    assert_eq!(v["regular"], true);
    let v = json(&["fan", "intersections", "--element", "h1"]);
    assert_eq!(v["plane_intersections"], 8);
    assert_eq!(v["plane_orbits"], 2);
    let v = json(&["fan", "intersections", "--element", "g4"]);
    assert_eq!(v["plane_intersections"], 0);
}

#[test]
fn group_commands() {
    let v = json(&["groups", "enumerate", "--order", "16"]);
    assert_schema("group-classes.json", &v);
    assert_eq!(v["classes"], 37);
    assert_eq!(v["subgroups"], 271);
    let v = json(&["groups", "m16"]);
    assert_eq!(v["subgroups"], 6);
    assert_eq!(v["all_conjugate"], true);
}

#[test]
fn identify_reproduces_catalog_labels() {
    let catalog = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/small_groups.txt");
    let dir = tempfile::tempdir().unwrap();
    let mut checked = 0;
    for line in fs::read_to_string(catalog).unwrap().lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let parts: Vec<&str> = line.splitn(3, ';').collect();
        let (gap, order) = (parts[0].parse::<u64>().unwrap(), parts[1].parse::<u64>().unwrap());
        if order > 8 && gap % 4 != 2 {
            continue;
        }
        let file = dir.path().join("gens.json");
        fs::write(&file, parts[2]).unwrap();
        let out = run_in(dir.path(), &["groups", "identify", "--generators", file.to_str().unwrap()]);
        assert!(out.status.success());
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!((v["order"].as_u64(), v["gap_index"].as_u64()), (Some(order), Some(gap)), "{line}");
        checked += 1;
    }
    assert!(checked >= 8);
    fs::write(dir.path().join("bad.json"), "[[[1,2]]]").unwrap();
    let out = run_in(dir.path(), &["groups", "identify", "--generators", dir.path().join("bad.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["table"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_schema("table.json", &v);
    assert_eq!(v["matches_expected"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 37);
    let five: Vec<&Value> = rows.iter().filter(|r| r["picY"] == 5).collect();
    assert_eq!(five.len(), 1);
    assert_eq!(five[0]["gap_index"], 6);
    assert_eq!(rows.iter().filter(|r| r["q4"] == 1 && r["q80"] == 17 && r["pic"] == 16).count(), 2);

    let csv = stdout(&run_in(dir.path(), &["table", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "gap_index,q4,q80,pic,ker,picY");
    assert_eq!(lines.len() - 1, rows.len());
    let md = stdout(&run_in(dir.path(), &["table", "--format", "md"]));
    assert_eq!(md.lines().filter(|l| l.starts_with("| ")).count(), 38);
}

fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

fn rehash(path: &Path, edit: impl FnOnce(&mut Value)) {
    let mut entry: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    edit(&mut entry["payload"]);
    let bytes = serde_json::to_vec(&canonical(entry["payload"].clone())).unwrap();
    entry["hash"] = Value::String(hex::encode(Sha256::digest(&bytes)));
    fs::write(path, serde_json::to_string(&entry).unwrap()).unwrap();
}

#[test]
fn tampered_table_cache_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["table"]).status.success());
    let path = dir.path().join("table-b4-order16.json");
    rehash(&path, |p| {
        let r = &mut p[0];
        r["picY"] = Value::from(r["picY"].as_i64().unwrap() + 1);
    });
    let out = run_in(dir.path(), &["table", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn corrupt_cache_is_rebuilt_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_in(dir.path(), &["fan", "build-flag"]);
    let path = dir.path().join("fan-flag.json");
    assert!(path.exists());
    fs::write(&path, "{\"kind\":\"fan\",\"hash\":\"00\",\"payload\":[]}").unwrap();
    let second = run_in(dir.path(), &["fan", "build-flag"]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("rebuilding"));
    let third = run_in(dir.path(), &["fan", "build-flag"]);
    assert!(third.stderr.is_empty());
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hypermirror"))
        .args(["fan", "build-flag"])
        .env("HYPERMIRROR_CACHE", dir.path())
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("fan-flag.json").exists());
}

#[test]
fn deterministic_output() {
    for args in [&["table", "--format", "md"][..], &["hodge", "orbifold"], &["sections", "freeness"]] {
        let (_d, a) = run(args);
        let (_d, b) = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let v = json(&["fan", "build-flag", "--deterministic", "false"]);
    assert!(v.get("elapsed_ms").is_some());
    assert_schema("fan.json", &v);
}

#[test]
fn hodge_commands() {
    let v = json(&["hodge", "quotient"]);
    assert_schema("hodge.json", &v);
    let pairs: Vec<(i64, i64, i64, u64)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (r["h11"].as_i64().unwrap(), r["h12"].as_i64().unwrap(), r["euler"].as_i64().unwrap(), r["fundamental_group"]["order"].as_u64().unwrap())
        })
        .collect();
    assert_eq!(pairs, vec![(9, 1, 16, 8), (18, 2, 32, 4), (36, 4, 64, 2)]);

    let (_d, out) = run(&["hodge", "quotient", "--group", "l1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("h1 has fixed points"));

    let v = json(&["hodge", "orbifold"]);
    assert_eq!((v["report"]["hodge"]["h11"].as_i64(), v["report"]["hodge"]["h12"].as_i64()), (Some(8), Some(4)));
    let mut fixed: Vec<&str> = v["fixed_point_elements"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    fixed.sort_unstable();
    assert_eq!(fixed, vec!["g^4·h1", "h1"]);
    let md = stdout(&run(&["hodge", "orbifold", "--format", "md"]).1);
    assert!(md.contains("h11 = 5+3, h12 = 1+3"));

    let v = json(&["hodge", "mirror-check"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["transposed_match"] == true));
}

#[test]
fn section_commands() {
    let v = json(&["sections", "decompose", "--group", "l2"]);
    let dims: Vec<u64> = v["spaces"].as_array().unwrap().iter().map(|s| s["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1; 5]);
    assert_eq!(v["residual_dim"], 4);
    let v = json(&["sections", "decompose", "--group", "l1"]);
    assert_eq!(v["total_dim"], 9);
    let v = json(&["sections", "singular-scan", "--section", "s_1_-1"]);
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 6);
    let v = json(&["sections", "fixed-locus", "--element", "g4"]);
    assert_eq!(v["isolated_points"], 16);
    let v = json(&["sections", "fixed-locus", "--element", "h1"]);
    assert_eq!(v["components"].as_array().unwrap().len(), 4);
    let v = json(&["sections", "freeness", "--group", "l1"]);
    let unfree: Vec<&str> =
        v.as_array().unwrap().iter().filter(|r| r["free"] == false).map(|r| r["element"].as_str().unwrap()).collect();
    assert_eq!(unfree, vec!["h1", "g^4·h1"]);
}
