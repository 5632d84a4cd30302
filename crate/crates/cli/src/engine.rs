//! The four table commands. Each one computes, writes a JSON document and a
//! CSV mirror per (preset, ring), and reports whether every check passed.

use std::path::{Path, PathBuf};

use ptilt_core::charcalc::{decomposition_matrices, Analysis, CheckOutcome};
use ptilt_core::hecke::KlTable;
use ptilt_core::laurent::LaurentPoly;
use ptilt_core::ring::{CoefRing, LocalIntegers, PrimeField, Rationals, Ring};
use ptilt_core::rootdata::{Preset, RootDatum, WeylGroup};
use ptilt_core::soergel::{char_zero_multiplicities, check_reduction, LibraryOptions};
use serde_json::{json, Value};

use crate::cache::{load_or_build, Cache, CacheStatus};
use crate::config::{JobConfig, RingFamily};
use crate::emit::{header, int_entries, merge, out_path, poly, poly_csv, word, write_csv, write_json};
use crate::error::CliError;

/// Result of a command: overall verdict, files written, and the failed
/// checks in a readable form.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, ..Outcome::default() }
    }

    pub fn absorb(&mut self, other: Outcome) {
        self.pass &= other.pass;
        self.files.extend(other.files);
        self.failures.extend(other.failures);
    }

    fn record(&mut self, label: &str, checks: &[CheckOutcome]) {
        for c in checks.iter().filter(|c| !c.pass) {
            self.pass = false;
            self.failures.push(format!("{label}: {}: {}", c.name, c.detail));
        }
    }
}

/// Settings shared by all computations of one invocation.
#[derive(Clone, Debug)]
pub struct Settings {
    pub out: PathBuf,
    pub cache: Option<Cache>,
    pub options: LibraryOptions,
    pub max_weyl: usize,
}

impl Settings {
    pub fn from_config(cfg: &JobConfig) -> Self {
        Settings {
            out: cfg.out.clone(),
            cache: cfg.cache.then(|| Cache::new(cfg.out.join(".cache"))),
            options: LibraryOptions { budget: cfg.budget_peel, ..LibraryOptions::default() },
            max_weyl: cfg.max_weyl,
        }
    }
}

pub fn group_for(preset: Preset, max_weyl: usize) -> Result<WeylGroup, CliError> {
    Ok(WeylGroup::with_cap(RootDatum::from_preset(preset), max_weyl)?)
}

/// The concrete rings requested by a config, in a fixed order.
pub fn coefficient_rings(cfg: &JobConfig) -> Vec<CoefRing> {
    let mut out = Vec::new();
    if cfg.rings.contains(&RingFamily::K) {
        out.push(CoefRing::Rationals);
    }
    for &l in &cfg.primes {
        if cfg.rings.contains(&RingFamily::O) {
            out.push(CoefRing::LocalIntegers(l));
        }
        if cfg.rings.contains(&RingFamily::F) {
            out.push(CoefRing::PrimeField(l));
        }
    }
    out
}

pub fn klpoly(g: &WeylGroup, dir: &Path) -> Result<Outcome, CliError> {
    let preset = g.datum().preset.to_string();
    let kl = KlTable::compute(g)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for w in g.elements() {
        for x in g.elements() {
            if !g.bruhat_leq(x, w) {
                continue;
            }
            let (h, p) = (kl.h(x, w), kl.p(x, w));
            entries.push(json!({ "x": word(g, x), "w": word(g, w), "h": poly(h), "p": poly(&p) }));
            let [ho, hc] = poly_csv(h);
            let [po, pc] = poly_csv(&p);
            rows.push(vec![word(g, x), word(g, w), ho, hc, po, pc]);
        }
    }
    let checks = vec![
        CheckOutcome::from_result(
            "kl_inversion",
            kl.inversion_check(g).map_err(|(x, y)| {
                ptilt_core::Error::Invariant(format!("inversion fails at ({}, {})", g.format(x), g.format(y)))
            }),
        ),
        CheckOutcome::from_result(
            "bar_invariance",
            kl.bar_invariance_check(g)
                .map_err(|w| ptilt_core::Error::Invariant(format!("b_{} is not bar invariant", g.format(w)))),
        ),
    ];
    let mut outcome = Outcome::new();
    outcome.record(&format!("klpoly {preset}"), &checks);
    let doc = merge(
        header("klpoly", &preset, Some("K"), None),
        json!({
            "group_order": g.size(),
            "entries": entries,
            "checks": checks,
            "pass": outcome.pass,
        }),
    );
    let stem = format!("klpoly_{preset}");
    let (jp, cp) = (out_path(dir, &stem, "json"), out_path(dir, &stem, "csv"));
    write_json(&jp, &doc)?;
    write_csv(&cp, &["x", "w", "h_offset", "h_coeffs", "p_offset", "p_coeffs"], &rows)?;
    outcome.files.extend([jp, cp]);
    Ok(outcome)
}

/// One library and everything derived from it.
#[derive(Clone, Debug)]
pub struct RunData {
    pub ring: CoefRing,
    pub analysis: Analysis,
    pub module_ranks: Vec<LaurentPoly>,
    pub cache: CacheStatus,
}

fn analyze<R: Ring>(g: &WeylGroup, ring: R, s: &Settings, kl: Option<&KlTable>) -> Result<RunData, CliError> {
    let kind = ring.kind();
    let (lib, cache) = load_or_build(s.cache.as_ref(), g, ring, s.options)?;
    let analysis = Analysis::run(&lib, kl)?;
    let module_ranks = lib.modules().iter().map(|m| m.graded_rank()).collect();
    Ok(RunData { ring: kind, analysis, module_ranks, cache })
}

/// Builds the library over `ring` and runs every table computation and
/// check on it. The KL table is used for calibration over the rationals.
pub fn run_analysis(g: &WeylGroup, ring: CoefRing, s: &Settings) -> Result<RunData, CliError> {
    match ring {
        CoefRing::Rationals => {
            let kl = KlTable::compute(g)?;
            analyze(g, Rationals, s, Some(&kl))
        }
        CoefRing::LocalIntegers(l) => analyze(g, LocalIntegers::new(l)?, s, None),
        CoefRing::PrimeField(l) => analyze(g, PrimeField::new(l)?, s, None),
    }
}

fn stem(cmd: &str, g: &WeylGroup, ring: CoefRing) -> String {
    format!("{cmd}_{}_{}", g.datum().preset, ring.tag())
}

pub fn emit_pcan(g: &WeylGroup, run: &RunData, dir: &Path) -> Result<Outcome, CliError> {
    let a = &run.analysis;
    let preset = g.datum().preset.to_string();
    let tag = run.ring.tag();
    let mut stalks = Vec::new();
    let mut rows = Vec::new();
    let mut homs = Vec::new();
    for w in g.elements() {
        for x in g.elements() {
            let h = &a.stalks.h[x][w];
            if !h.is_zero() {
                stalks.push(json!({ "x": word(g, x), "w": word(g, w), "h": poly(h), "rank": a.stalks.ungraded[x][w] }));
                let [o, c] = poly_csv(h);
                rows.push(vec![word(g, x), word(g, w), o, c, a.stalks.ungraded[x][w].to_string()]);
            }
        }
    }
    for v in g.elements() {
        for w in g.elements() {
            let p = &a.homs.graded[v][w];
            if !p.is_zero() {
                homs.push(json!({ "v": word(g, v), "w": word(g, w), "graded": poly(p), "rank": a.homs.ungraded[v][w] }));
            }
        }
    }
    let module_ranks: Vec<Value> = g
        .elements()
        .map(|w| json!({ "w": word(g, w), "graded_rank": poly(&run.module_ranks[w]) }))
        .collect();
    let mut outcome = Outcome::new();
    outcome.record(&format!("pcan {preset} {tag}"), &a.checks);
    let doc = merge(
        header("pcan", &preset, Some(&tag), run.ring.prime()),
        json!({
            "group_order": g.size(),
            "stalks": stalks,
            "hom_ranks": homs,
            "module_ranks": module_ranks,
            "checks": a.checks,
            "pass": outcome.pass,
        }),
    );
    let st = stem("pcan", g, run.ring);
    let (jp, cp) = (out_path(dir, &st, "json"), out_path(dir, &st, "csv"));
    write_json(&jp, &doc)?;
    write_csv(&cp, &["x", "w", "h_offset", "h_coeffs", "rank"], &rows)?;
    outcome.files.extend([jp, cp]);
    Ok(outcome)
}

pub fn emit_mult(g: &WeylGroup, run: &RunData, dir: &Path) -> Result<Outcome, CliError> {
    let a = &run.analysis;
    let preset = g.datum().preset.to_string();
    let tag = run.ring.tag();
    let m = &a.mult;
    let mut rows = Vec::new();
    for w in g.elements() {
        for v in g.elements() {
            let vals = [m.tilt[w][v], m.comp[w][v], a.euler.inverse[w][v], a.euler.chi[w][v]];
            if vals.iter().any(|x| *x != 0) {
                let mut r = vec![word(g, w), word(g, v)];
                r.extend(vals.iter().map(i64::to_string));
                rows.push(r);
            }
        }
    }
    let mut outcome = Outcome::new();
    outcome.record(&format!("mult {preset} {tag}"), &a.checks);
    let doc = merge(
        header("mult", &preset, Some(&tag), run.ring.prime()),
        json!({
            "group_order": g.size(),
            "tilt": int_entries(g, &m.tilt),
            "comp": int_entries(g, &m.comp),
            "tilting_hom_rank": int_entries(g, &m.homrank),
            "euler_inverse": int_entries(g, &a.euler.inverse),
            "euler_chi": int_entries(g, &a.euler.chi),
            "checks": a.checks,
            "pass": outcome.pass,
        }),
    );
    let st = stem("mult", g, run.ring);
    let (jp, cp) = (out_path(dir, &st, "json"), out_path(dir, &st, "csv"));
    write_json(&jp, &doc)?;
    write_csv(&cp, &["row", "col", "tilt", "comp", "inverse", "chi"], &rows)?;
    outcome.files.extend([jp, cp]);
    Ok(outcome)
}

pub fn decomp(g: &WeylGroup, l: u64, s: &Settings, dir: &Path) -> Result<Outcome, CliError> {
    let preset = g.datum().preset.to_string();
    let o = LocalIntegers::new(l)?;
    let (lo, _) = load_or_build(s.cache.as_ref(), g, o, s.options)?;
    let (lf, _) = load_or_build(s.cache.as_ref(), g, o.residue_ring(), s.options)?;
    let (lq, _) = load_or_build(s.cache.as_ref(), g, Rationals, s.options)?;
    let mut checks = vec![CheckOutcome::from_result("reduction_indecomposable", check_reduction(&lo, &lf))];
    let mut body = json!({ "group_order": g.size() });
    let mut rows = Vec::new();
    match char_zero_multiplicities(&lo, &lq).and_then(|mult| Ok((decomposition_matrices(g, &mult)?, mult))) {
        Ok((d, mult)) => {
            checks.push(CheckOutcome { name: "e_unitriangular".into(), pass: true, detail: String::new() });
            let mut graded = Vec::new();
            for w in g.elements() {
                for y in g.elements() {
                    if !mult[y][w].is_zero() {
                        graded.push(json!({ "y": word(g, y), "w": word(g, w), "multiplicity": poly(&mult[y][w]) }));
                    }
                }
            }
            for v in g.elements() {
                for w in g.elements() {
                    let vals = [d.e[v][w], d.t[v][w], d.p[v][w], d.i[v][w]];
                    if vals.iter().any(|x| *x != 0) {
                        let mut r = vec![word(g, v), word(g, w)];
                        r.extend(vals.iter().map(i64::to_string));
                        rows.push(r);
                    }
                }
            }
            body = merge(
                body,
                json!({
                    "E": int_entries(g, &d.e),
                    "T": int_entries(g, &d.t),
                    "P": int_entries(g, &d.p),
                    "I": int_entries(g, &d.i),
                    "provenance": { "E": d.provenance.e, "T": d.provenance.t, "P": d.provenance.p, "I": d.provenance.i },
                    "graded_multiplicities": graded,
                }),
            );
        }
        Err(e) => checks.push(CheckOutcome { name: "e_unitriangular".into(), pass: false, detail: e.to_string() }),
    }
    let mut outcome = Outcome::new();
    outcome.record(&format!("decomp {preset} {l}"), &checks);
    let doc = merge(
        header("decomp", &preset, Some(&o.kind().tag()), Some(l)),
        merge(body, json!({ "checks": checks, "pass": outcome.pass })),
    );
    let st = format!("decomp_{preset}_{l}");
    let (jp, cp) = (out_path(dir, &st, "json"), out_path(dir, &st, "csv"));
    write_json(&jp, &doc)?;
    write_csv(&cp, &["row", "col", "E", "T", "P", "I"], &rows)?;
    outcome.files.extend([jp, cp]);
    Ok(outcome)
}

/// Runs one of the table commands as configured.
pub fn run_command(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let s = Settings::from_config(cfg);
    let preset = cfg.preset.ok_or_else(|| CliError::Config("no preset given".into()))?;
    let g = group_for(preset, cfg.max_weyl)?;
    let mut outcome = Outcome::new();
    use crate::config::Command;
    match cfg.command {
        Command::Klpoly => outcome.absorb(klpoly(&g, &s.out)?),
        Command::Pcan | Command::Mult => {
            for ring in coefficient_rings(cfg) {
                let run = run_analysis(&g, ring, &s)?;
                let o = if cfg.command == Command::Pcan {
                    emit_pcan(&g, &run, &s.out)?
                } else {
                    emit_mult(&g, &run, &s.out)?
                };
                outcome.absorb(o);
            }
        }
        Command::Decomp => {
            for &l in &cfg.primes {
                outcome.absorb(decomp(&g, l, &s, &s.out)?);
            }
        }
        Command::Selftest => unreachable!("handled by the selftest module"),
    }
    Ok(outcome)
}
