use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn ptilt(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_ptilt")).args(args).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn poly(v: &Value) -> (i64, Vec<i64>) {
    (
        v["offset"].as_i64().unwrap(),
        v["coeffs"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect(),
    )
}

#[test]
fn klpoly_a2_has_all_trivial_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = ptilt(&["klpoly", "--preset", "A2"], dir.path());
    assert_eq!(code, 0);
    let doc = json(&dir.path().join("klpoly_A2.json"));
    assert_eq!(doc["schema_version"], "charcalc/v1");
    let entries = doc["entries"].as_array().unwrap();
    // all comparable pairs of the Bruhat order on S_3
    assert_eq!(entries.len(), 19);
    assert!(entries.iter().all(|e| poly(&e["p"]) == (0, vec![1])));
}

#[test]
fn klpoly_a3_contains_one_plus_q() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ptilt(&["klpoly", "--preset", "A3"], dir.path()).0, 0);
    let doc = json(&dir.path().join("klpoly_A3.json"));
    let hits = doc["entries"].as_array().unwrap().iter().filter(|e| poly(&e["p"]) == (0, vec![1, 1])).count();
    assert!(hits > 0);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = ptilt(&["pcan", "--preset", "G2", "--prime", "3"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("not good"), "{err}");
    assert_eq!(ptilt(&["klpoly", "--preset", ""], dir.path()).0, 2);
    assert_eq!(ptilt(&["klpoly"], dir.path()).0, 2);
    assert_eq!(ptilt(&["pcan", "--preset", "A3", "--max-weyl", "10"], dir.path()).0, 2);
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "preset = B2\nprime = 2\n").unwrap();
    assert_eq!(ptilt(&["selftest", "--config", conf.to_str().unwrap()], dir.path()).0, 2);
}

#[test]
fn pcan_a1_gives_v_below_the_reflection() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ptilt(&["pcan", "--preset", "A1", "--prime", "5"], dir.path()).0, 0);
    for tag in ["K", "O5", "F5"] {
        let doc = json(&dir.path().join(format!("pcan_A1_{tag}.json")));
        let st = doc["stalks"].as_array().unwrap();
        let e = st.iter().find(|e| e["x"] == "e" && e["w"] == "1").unwrap();
        assert_eq!(poly(&e["h"]), (1, vec![1]), "{tag}");
        assert_eq!(doc["pass"], true);
    }
}

#[test]
fn pcan_a2_at_five_matches_characteristic_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ptilt(&["pcan", "--preset", "A2", "--prime", "5", "--ring", "K,F"], dir.path()).0, 0);
    let k = json(&dir.path().join("pcan_A2_K.json"));
    let f = json(&dir.path().join("pcan_A2_F5.json"));
    assert_eq!(k["stalks"], f["stalks"]);
}

#[test]
fn mult_and_decomp_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ptilt(&["mult", "--preset", "B2", "--prime", "3", "--ring", "F"], dir.path()).0, 0);
    let doc = json(&dir.path().join("mult_B2_F3.json"));
    let comp = doc["comp"].as_array().unwrap();
    let diag: Vec<_> = comp.iter().filter(|e| e["row"] == e["col"]).collect();
    assert_eq!(diag.len(), 8);
    assert!(diag.iter().all(|e| e["value"] == 1));
    assert!(doc["tilt"].as_array().unwrap().iter().any(|e| e["row"] == "1" && e["col"] == "e" && e["value"] == 1));

    assert_eq!(ptilt(&["decomp", "--preset", "B2", "--prime", "3"], dir.path()).0, 0);
    let doc = json(&dir.path().join("decomp_B2_3.json"));
    assert_eq!(doc["provenance"]["E"], "computed");
    for m in ["T", "P", "I"] {
        assert!(doc["provenance"][m].as_str().unwrap().starts_with("derived"));
    }
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn outputs_are_byte_identical_with_and_without_cache() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["pcan", "--preset", "B2", "--prime", "5"];
    assert_eq!(ptilt(&args, a.path()).0, 0);
    // second run in the same directory reads the cache
    assert_eq!(ptilt(&args, a.path()).0, 0);
    let mut with_no_cache = args.to_vec();
    with_no_cache.push("--no-cache");
    assert_eq!(ptilt(&with_no_cache, b.path()).0, 0);
    assert!(!b.path().join(".cache").exists());
    for name in ["pcan_B2_K.json", "pcan_B2_O5.json", "pcan_B2_F5.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn corrupted_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["pcan", "--preset", "A2", "--prime", "5", "--ring", "O"];
    assert_eq!(ptilt(&args, dir.path()).0, 0);
    let before = fs::read(dir.path().join("pcan_A2_O5.json")).unwrap();
    let cache = dir.path().join(".cache");
    let entries: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    fs::write(&entries[0], "{ not json").unwrap();
    assert_eq!(ptilt(&args, dir.path()).0, 0);
    assert_eq!(fs::read(dir.path().join("pcan_A2_O5.json")).unwrap(), before);
    let text = fs::read_to_string(&entries[0]).unwrap();
    assert!(serde_json::from_str::<Value>(&text).is_ok());
}
