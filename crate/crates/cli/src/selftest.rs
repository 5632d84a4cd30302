//! The acceptance suite. Jobs run in parallel; their results are collected
//! in job order so the report does not depend on scheduling.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ptilt_core::coinvariant::{base_change_report, Coinvariants};
use ptilt_core::ring::{CoefRing, LocalIntegers, Ring};
use ptilt_core::rootdata::{CartanType, Preset};
use ptilt_core::soergel::{bs_module, hom_reduction_check, Context};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::JobConfig;
use crate::emit::{header, merge, write_json};
use crate::engine::{decomp, emit_mult, emit_pcan, group_for, klpoly, run_analysis, Outcome, Settings};
use crate::error::CliError;

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "char0_calibration"),
    (2, "pairing_identity"),
    (3, "recursion_consistency"),
    (4, "coinvariant_suite"),
    (5, "bott_samelson_hom_reduction"),
    (6, "integral_indecomposables"),
    (7, "kl_inversion"),
    (8, "self_duality_and_symmetry"),
    (9, "euler_inverse"),
    (10, "determinism"),
];

const A: CartanType = CartanType::A;
const B: CartanType = CartanType::B;
const C: CartanType = CartanType::C;
const G: CartanType = CartanType::G;

fn adj(t: CartanType, n: usize) -> Preset {
    Preset::Adjoint(t, n)
}

/// Presets checked against the KL recursion over the rationals.
pub fn calibration_presets() -> Vec<Preset> {
    vec![adj(A, 1), adj(A, 2), adj(A, 3), adj(B, 2), adj(G, 2)]
}

/// (preset, prime) pairs analysed over the local ring and the prime field.
pub fn modular_runs() -> Vec<(Preset, u64)> {
    vec![(adj(A, 2), 2), (adj(A, 2), 5), (adj(A, 2), 7), (adj(B, 2), 3), (adj(B, 2), 5), (adj(G, 2), 5), (Preset::Gl(3), 2)]
}

pub fn coinvariant_runs() -> Vec<(Preset, u64)> {
    vec![(adj(A, 2), 5), (adj(B, 2), 3), (adj(G, 2), 5), (Preset::Gl(3), 2)]
}

pub fn decomposition_runs() -> Vec<(Preset, u64)> {
    vec![(adj(A, 2), 2), (adj(A, 2), 5), (adj(A, 2), 7), (adj(B, 2), 3), (adj(B, 2), 5)]
}

/// Every supported preset with at most 48 group elements.
pub fn small_presets() -> Vec<Preset> {
    vec![
        adj(A, 1),
        adj(A, 2),
        adj(A, 3),
        adj(B, 2),
        adj(B, 3),
        adj(C, 2),
        adj(C, 3),
        adj(G, 2),
        Preset::Gl(1),
        Preset::Gl(2),
        Preset::Gl(3),
        Preset::Gl(4),
    ]
}

#[derive(Clone, Debug)]
enum Job {
    Analysis(Preset, CoefRing),
    Coinvariants(Preset, u64),
    BottSamelson(Preset, u64, usize),
    Decomposition(Preset, u64),
    Kl(Preset),
    Determinism(Preset, u64),
}

/// One verdict for one criterion on one run.
#[derive(Clone, Debug, Serialize)]
pub struct Line {
    #[serde(skip)]
    pub criterion: u32,
    pub run: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub runs: Vec<Line>,
}

fn line(criterion: u32, run: &str, r: Result<String, String>) -> Line {
    match r {
        Ok(detail) => Line { criterion, run: run.into(), pass: true, detail },
        Err(detail) => Line { criterion, run: run.into(), pass: false, detail },
    }
}

fn jobs(cfg: &JobConfig) -> Vec<Job> {
    let keep_p = |p: &Preset| cfg.preset.is_none_or(|q| q == *p);
    let keep_l = |l: &u64| cfg.primes.is_empty() || cfg.primes.contains(l);
    let mut out = Vec::new();
    for p in calibration_presets().into_iter().filter(keep_p) {
        out.push(Job::Analysis(p, CoefRing::Rationals));
    }
    for (p, l) in modular_runs().into_iter().filter(|(p, l)| keep_p(p) && keep_l(l)) {
        out.push(Job::Analysis(p, CoefRing::LocalIntegers(l)));
        out.push(Job::Analysis(p, CoefRing::PrimeField(l)));
    }
    for (p, l) in coinvariant_runs().into_iter().filter(|(p, l)| keep_p(p) && keep_l(l)) {
        out.push(Job::Coinvariants(p, l));
    }
    if keep_p(&adj(B, 2)) && keep_l(&3) {
        out.push(Job::BottSamelson(adj(B, 2), 3, 4));
    }
    for (p, l) in decomposition_runs().into_iter().filter(|(p, l)| keep_p(p) && keep_l(l)) {
        out.push(Job::Decomposition(p, l));
    }
    for p in small_presets().into_iter().filter(keep_p) {
        out.push(Job::Kl(p));
    }
    let (dp, dl) = match (cfg.preset, cfg.primes.first()) {
        (Some(p), Some(&l)) => (p, l),
        (Some(p), None) => (p, 0),
        (None, _) => (adj(A, 2), 5),
    };
    out.push(Job::Determinism(dp, dl));
    out
}

fn check_lines(criterion: u32, run: &str, checks: &[ptilt_core::charcalc::CheckOutcome], names: &[&str]) -> Line {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| names.contains(&c.name.as_str()) && !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let present = checks.iter().filter(|c| names.contains(&c.name.as_str())).count();
    if present == 0 {
        line(criterion, run, Err(format!("checks {names:?} were not run")))
    } else if failed.is_empty() {
        line(criterion, run, Ok(names.join(", ")))
    } else {
        line(criterion, run, Err(failed.join("; ")))
    }
}

fn outcome_line(criterion: u32, run: &str, r: Result<Outcome, CliError>) -> (Line, Vec<PathBuf>) {
    match r {
        Ok(o) if o.pass => (line(criterion, run, Ok(String::new())), o.files),
        Ok(o) => (line(criterion, run, Err(o.failures.join("; "))), o.files),
        Err(e) => (line(criterion, run, Err(e.to_string())), Vec::new()),
    }
}

fn run_job(job: &Job, s: &Settings) -> (Vec<Line>, Vec<PathBuf>) {
    match job {
        Job::Analysis(p, ring) => {
            let label = format!("{p} {}", ring.tag());
            let calibrated = *ring == CoefRing::Rationals && calibration_presets().contains(p);
            let res = group_for(*p, s.max_weyl).and_then(|g| {
                let run = run_analysis(&g, *ring, s)?;
                let mut files = emit_pcan(&g, &run, &s.out)?.files;
                files.extend(emit_mult(&g, &run, &s.out)?.files);
                Ok((run, files))
            });
            match res {
                Ok((run, files)) => {
                    let c = &run.analysis.checks;
                    let mut lines = Vec::new();
                    if calibrated {
                        lines.push(check_lines(1, &label, c, &["kl_calibration"]));
                    }
                    lines.push(check_lines(2, &label, c, &["pairing"]));
                    lines.push(check_lines(3, &label, c, &["tilting_roundtrip", "tilt_equals_stalk"]));
                    lines.push(check_lines(8, &label, c, &["self_duality", "palindromic_ranks", "inverse_symmetry"]));
                    lines.push(line(9, &label, Ok(format!("inverted a {0}x{0} unitriangular matrix", run.analysis.euler.inverse.len()))));
                    (lines, files)
                }
                Err(e) => {
                    let mut ids = vec![2, 3, 8, 9];
                    if calibrated {
                        ids.insert(0, 1);
                    }
                    (ids.into_iter().map(|i| line(i, &label, Err(e.to_string()))).collect(), Vec::new())
                }
            }
        }
        Job::Coinvariants(p, l) => {
            let label = format!("{p} l={l}");
            (vec![line(4, &label, coinvariant_suite(*p, *l, s))], Vec::new())
        }
        Job::BottSamelson(p, l, max_len) => {
            let label = format!("{p} l={l} length<={max_len}");
            (vec![line(5, &label, bott_samelson_suite(*p, *l, *max_len, s))], Vec::new())
        }
        Job::Decomposition(p, l) => {
            let label = format!("{p} l={l}");
            let (ln, files) = outcome_line(6, &label, group_for(*p, s.max_weyl).and_then(|g| decomp(&g, *l, s, &s.out)));
            (vec![ln], files)
        }
        Job::Kl(p) => {
            let label = p.to_string();
            let (ln, files) = outcome_line(7, &label, group_for(*p, s.max_weyl).and_then(|g| klpoly(&g, &s.out)));
            (vec![ln], files)
        }
        Job::Determinism(p, l) => {
            let label = if *l == 0 { format!("{p} K") } else { format!("{p} F{l}") };
            (vec![line(10, &label, determinism_probe(*p, *l, s))], Vec::new())
        }
    }
}

fn coinvariant_suite(p: Preset, l: u64, s: &Settings) -> Result<String, String> {
    let g = group_for(p, s.max_weyl).map_err(|e| e.to_string())?;
    let o = LocalIntegers::new(l).map_err(|e| e.to_string())?;
    let co = Coinvariants::new(&g, o).map_err(|e| e.to_string())?;
    let cf = Coinvariants::new(&g, o.residue_ring()).map_err(|e| e.to_string())?;
    for s in 0..g.num_simple() {
        co.cs_data(s).map_err(|e| e.to_string())?;
        cf.cs_data(s).map_err(|e| e.to_string())?;
    }
    base_change_report(&co, &cf)?;
    Ok(format!("rank C = |W| = {}; {{1, δ_s}} is a C_s-basis for every s; base change exact in every degree", g.size()))
}

fn bott_samelson_suite(p: Preset, l: u64, max_len: usize, s: &Settings) -> Result<String, String> {
    let g = group_for(p, s.max_weyl).map_err(|e| e.to_string())?;
    let ctx = Context::new(&g, LocalIntegers::new(l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = g.num_simple();
    let mut seqs: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = seqs.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|q| (0..r).map(move |t| {
                let mut q = q.clone();
                q.push(t);
                q
            }))
            .collect();
        seqs.extend(frontier.iter().cloned());
    }
    let modules: Vec<_> = seqs.iter().map(|q| bs_module(&ctx, q)).collect();
    let mut pairs = 0;
    for (a, m) in modules.iter().enumerate() {
        for (b, n) in modules.iter().enumerate() {
            hom_reduction_check(m, n).map_err(|e| format!("BS{:?} -> BS{:?}: {e}", seqs[a], seqs[b]))?;
            pairs += 1;
        }
    }
    Ok(format!("{} sequences, {pairs} ordered pairs", seqs.len()))
}

/// Recomputes one run twice from scratch, and once through the cache when
/// caching is enabled, and compares the emitted files byte for byte.
fn determinism_probe(p: Preset, l: u64, s: &Settings) -> Result<String, String> {
    let err = |e: CliError| e.to_string();
    let g = group_for(p, s.max_weyl).map_err(err)?;
    let ring = if l == 0 { CoefRing::Rationals } else { CoefRing::PrimeField(l) };
    let produce = |settings: &Settings| -> Result<Vec<Vec<u8>>, CliError> {
        let dir = tempfile::tempdir()?;
        let run = run_analysis(&g, ring, settings)?;
        let mut files = emit_pcan(&g, &run, dir.path())?.files;
        files.extend(emit_mult(&g, &run, dir.path())?.files);
        files.iter().map(|f| Ok(fs::read(f)?)).collect()
    };
    let fresh = Settings { cache: None, ..s.clone() };
    let a = produce(&fresh).map_err(err)?;
    let b = produce(&fresh).map_err(err)?;
    if a != b {
        return Err("two fresh runs differ".into());
    }
    let mut detail = format!("{} files identical across fresh runs", a.len());
    if s.cache.is_some() {
        let first = produce(s).map_err(err)?;
        let second = produce(s).map_err(err)?;
        if first != a || second != a {
            return Err("cached run differs from a fresh run".into());
        }
        detail.push_str("; cached runs identical");
    }
    Ok(detail)
}

/// Runs all jobs and writes `selftest.json`. The outcome passes when every
/// criterion does.
pub fn run(cfg: &JobConfig) -> Result<(Outcome, Vec<CriterionReport>), CliError> {
    let s = Settings::from_config(cfg);
    fs::create_dir_all(&s.out)?;
    let jobs = jobs(cfg);
    let results: Mutex<Vec<Option<(Vec<Line>, Vec<PathBuf>)>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= jobs.len() {
                    break;
                }
                let r = run_job(&jobs[i], &s);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let results: Vec<_> = results.into_inner().unwrap().into_iter().map(|r| r.expect("every job ran")).collect();

    let mut lines = Vec::new();
    let mut files = Vec::new();
    for (l, f) in results {
        lines.extend(l);
        files.extend(f);
    }
    files.sort();
    files.dedup();
    let mut digest = Sha256::new();
    for f in &files {
        let rel = f.strip_prefix(&s.out).unwrap_or(f);
        digest.update(rel.to_string_lossy().as_bytes());
        digest.update([0]);
        digest.update(fs::read(f)?);
    }
    let reports: Vec<CriterionReport> = CRITERIA
        .iter()
        .map(|&(id, name)| {
            let runs: Vec<Line> = lines.iter().filter(|l| l.criterion == id).cloned().collect();
            CriterionReport { id, name: name.into(), pass: runs.iter().all(|l| l.pass), runs }
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let label = cfg.preset.map(|p| p.to_string()).unwrap_or_else(|| "default".into());
    let doc = merge(
        header("selftest", &label, None, None),
        json!({
            "criteria": reports,
            "pass": pass,
            "outputs": files.iter().map(|f| f.strip_prefix(&s.out).unwrap_or(f).to_string_lossy().into_owned()).collect::<Vec<_>>(),
            "output_digest": hex::encode(digest.finalize()),
        }),
    );
    let path = s.out.join("selftest.json");
    write_json(&path, &doc)?;
    files.push(path);
    let failures = reports
        .iter()
        .flat_map(|r| r.runs.iter().filter(|l| !l.pass).map(move |l| format!("criterion {} {}: {}", r.id, l.run, l.detail)))
        .collect();
    Ok((Outcome { pass, files, failures }, reports))
}
