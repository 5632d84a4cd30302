//! Acceptance run: executes the `selftest` command twice into fresh
//! directories and prints one line per criterion. Criterion 1 is also
//! re-derived here from the emitted files, and criterion 10 is decided by a
//! byte comparison of the two output trees.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use serde_json::Value;

fn selftest(out: &Path) -> (i32, Value) {
    let status = Command::new(env!("CARGO_BIN_EXE_ptilt"))
        .args(["selftest", "--out"])
        .arg(out)
        .output()
        .expect("ptilt runs");
    let doc = fs::read_to_string(out.join("selftest.json"))
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or(Value::Null);
    (status.status.code().unwrap_or(-1), doc)
}

fn files(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn load(path: &Path) -> Option<Value> {
    serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
}

/// Nonzero `h` entries of a table keyed by `(x, w)`.
fn h_table(rows: &Value) -> BTreeMap<(String, String), Value> {
    rows.as_array()
        .into_iter()
        .flatten()
        .filter(|e| e["h"]["coeffs"].as_array().is_some_and(|c| c.iter().any(|v| v != 0)))
        .map(|e| ((e["x"].to_string(), e["w"].to_string()), e["h"].clone()))
        .collect()
}

/// Compares every characteristic-zero stalk table with the combinatorial one.
fn recheck_calibration(dir: &Path) -> Result<usize, String> {
    let mut compared = 0;
    for name in fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()) {
        let Some(preset) = name.strip_prefix("pcan_").and_then(|n| n.strip_suffix("_K.json")) else {
            continue;
        };
        let stalks = load(&dir.join(&name)).ok_or(format!("{name} unreadable"))?;
        let kl = load(&dir.join(format!("klpoly_{preset}.json"))).ok_or(format!("klpoly_{preset}.json missing"))?;
        if h_table(&stalks["stalks"]) != h_table(&kl["entries"]) {
            return Err(format!("{preset}: stalks differ from the combinatorial table"));
        }
        compared += 1;
    }
    if compared == 0 {
        return Err("no characteristic-zero tables found".into());
    }
    Ok(compared)
}

fn main() -> ExitCode {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let (code_a, doc_a) = selftest(first.path());
    let (code_b, _) = selftest(second.path());

    let reports = doc_a["criteria"].as_array().cloned().unwrap_or_default();
    let mut all = code_a == 0 && code_b == 0 && reports.len() == 10;
    if reports.len() != 10 {
        println!("selftest produced {} criteria instead of 10", reports.len());
    }

    for report in &reports {
        let id = report["id"].as_u64().unwrap_or(0);
        let name = report["name"].as_str().unwrap_or("?");
        let mut pass = report["pass"].as_bool().unwrap_or(false);
        let runs = report["runs"].as_array().map_or(0, Vec::len);
        let mut detail = format!("{runs} runs");
        if let Some(bad) = report["runs"].as_array().into_iter().flatten().find(|r| r["pass"] != true) {
            detail = format!("{}: {}", bad["run"].as_str().unwrap_or("?"), bad["detail"].as_str().unwrap_or(""));
        }
        match id {
            1 => match recheck_calibration(first.path()) {
                Ok(n) => detail.push_str(&format!(", {n} tables rechecked")),
                Err(e) => {
                    pass = false;
                    detail = e;
                }
            },
            10 => {
                let (a, b) = (files(first.path()), files(second.path()));
                if a != b {
                    pass = false;
                    let differing: Vec<_> = a
                        .keys()
                        .chain(b.keys())
                        .filter(|k| a.get(*k) != b.get(*k))
                        .map(|k| k.display().to_string())
                        .collect();
                    detail = format!("outputs differ: {}", differing.join(", "));
                } else {
                    detail.push_str(&format!(", {} files identical across two runs", a.len()));
                }
            }
            _ => {}
        }
        all &= pass;
        println!("criterion {id:>2} {name:<28} {}  {detail}", if pass { "PASS" } else { "FAIL" });
    }

    if all {
        ExitCode::SUCCESS
    } else {
        println!("acceptance failed (exit codes {code_a}, {code_b})");
        ExitCode::FAILURE
    }
}
