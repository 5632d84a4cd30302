//! Deterministic JSON and CSV writers.
//!
//! JSON objects come out with sorted keys (the default map of `serde_json`),
//! tables are listed in the numbering of the group elements, which sorts by
//! length and then by canonical word, and nothing depends on the clock.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ptilt_core::laurent::LaurentPoly;
use ptilt_core::rootdata::{WElem, WeylGroup};
use ptilt_core::ENGINE_VERSION;
use serde_json::{json, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "charcalc/v1";

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    write_atomic(path, &bytes)
}

/// Common header fields of every output document.
pub fn header(command: &str, preset: &str, ring: Option<&str>, prime: Option<u64>) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "engine": ENGINE_VERSION,
        "command": command,
        "preset": preset,
        "ring": ring,
        "prime": prime,
    })
}

/// Adds the fields of `extra` to the object `base`.
pub fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

/// `{"offset": lowest exponent, "coeffs": [...]}`, coefficients from the
/// lowest exponent upwards.
pub fn poly(p: &LaurentPoly) -> Value {
    let (offset, coeffs) = p.to_dense_i64();
    json!({ "offset": offset, "coeffs": coeffs })
}

/// CSV form of a polynomial: offset and space-separated coefficients.
pub fn poly_csv(p: &LaurentPoly) -> [String; 2] {
    let (offset, coeffs) = p.to_dense_i64();
    [offset.to_string(), coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")]
}

pub fn word(g: &WeylGroup, w: WElem) -> String {
    g.format(w)
}

/// Nonzero entries of an integer table as `{"row", "col", "value"}` records.
pub fn int_entries(g: &WeylGroup, t: &[Vec<i64>]) -> Value {
    let mut out = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            if t[a][b] != 0 {
                out.push(json!({ "row": word(g, a), "col": word(g, b), "value": t[a][b] }));
            }
        }
    }
    Value::Array(out)
}

/// Output file path `<out>/<stem>.<ext>`.
pub fn out_path(dir: &Path, stem: &str, ext: &str) -> PathBuf {
    dir.join(format!("{stem}.{ext}"))
}
