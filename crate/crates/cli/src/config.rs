//! Command-line flags, the key-value config file, and their merge into a
//! validated [`JobConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ptilt_core::ring::is_prime;
use ptilt_core::rootdata::{Preset, RootDatum, DEFAULT_WEYL_CAP};
use ptilt_core::soergel::DEFAULT_BUDGET;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ptilt", version, about = "Stalks, multiplicities and decomposition matrices of Soergel modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Kazhdan–Lusztig polynomials and the inversion check.
    Klpoly,
    /// Stalk polynomials of the indecomposable modules.
    Pcan,
    /// Tilting and composition multiplicities.
    Mult,
    /// Decomposition matrices between the local ring and its fraction field.
    Decomp,
    /// Runs the acceptance suite and writes a pass/fail report.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Klpoly => "klpoly",
            Command::Pcan => "pcan",
            Command::Mult => "mult",
            Command::Decomp => "decomp",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Debug, Default, clap::Args)]
pub struct Flags {
    /// Group, for example A2, B2, G2 or GL3.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Primes, comma separated or repeated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub prime: Vec<u64>,
    /// Coefficient rings among K, O and F, comma separated or repeated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub ring: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Ignore and do not write the module cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Matrix-product budget for each indecomposability certificate.
    #[arg(long, global = true)]
    pub budget_peel: Option<usize>,
    /// Largest Weyl group to enumerate.
    #[arg(long, global = true)]
    pub max_weyl: Option<usize>,
    /// Key-value config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// The three coefficient ring families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RingFamily {
    K,
    O,
    F,
}

impl RingFamily {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "K" | "Q" => Ok(RingFamily::K),
            "O" => Ok(RingFamily::O),
            "F" => Ok(RingFamily::F),
            other => Err(CliError::Config(format!("unknown ring {other:?}; expected K, O or F"))),
        }
    }
}

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: Command,
    pub preset: Option<Preset>,
    pub primes: Vec<u64>,
    pub rings: Vec<RingFamily>,
    pub out: PathBuf,
    pub cache: bool,
    pub budget_peel: usize,
    pub max_weyl: usize,
}

/// Values read from a config file, before flags are applied.
#[derive(Clone, Debug, Default)]
struct FileValues {
    preset: Option<String>,
    primes: Option<Vec<u64>>,
    rings: Option<Vec<String>>,
    out: Option<PathBuf>,
    cache: Option<bool>,
    budget_peel: Option<usize>,
    max_weyl: Option<usize>,
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Config(format!("bad value {v:?} for {key}")))
}

fn read_file(path: &Path) -> Result<FileValues, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
    let mut out = FileValues::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("{}:{}: expected key = value", path.display(), lineno + 1)));
        };
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "preset" => out.preset = Some(value.to_string()),
            "prime" | "primes" => {
                out.primes = Some(split_list(value).iter().map(|p| parse_num(&key, p)).collect::<Result<_, _>>()?)
            }
            "ring" | "rings" => out.rings = Some(split_list(value)),
            "out" => out.out = Some(PathBuf::from(value)),
            "cache" => out.cache = Some(parse_num(&key, value)?),
            "no_cache" => out.cache = Some(!parse_num::<bool>(&key, value)?),
            "budget_peel" => out.budget_peel = Some(parse_num(&key, value)?),
            "max_weyl" => out.max_weyl = Some(parse_num(&key, value)?),
            _ => {
                return Err(CliError::Config(format!("{}:{}: unknown key {key:?}", path.display(), lineno + 1)));
            }
        }
    }
    Ok(out)
}

impl JobConfig {
    /// Merges the config file (if any) with the flags and validates the
    /// result: the preset must parse, and every prime must be a good,
    /// non-torsion prime for it.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileValues::default(),
        };
        let preset_str = flags.preset.clone().or(file.preset);
        let preset = match preset_str {
            Some(s) if s.trim().is_empty() => return Err(CliError::Config("empty preset".into())),
            Some(s) => Some(s.parse::<Preset>().map_err(|e| CliError::Config(e.to_string()))?),
            None if command == Command::Selftest => None,
            None => return Err(CliError::Config(format!("{} needs --preset", command.name()))),
        };
        let mut primes = if flags.prime.is_empty() { file.primes.unwrap_or_default() } else { flags.prime.clone() };
        primes.sort_unstable();
        primes.dedup();
        for &p in &primes {
            if !is_prime(p) {
                return Err(CliError::Config(format!("{p} is not a prime")));
            }
            if let Some(preset) = preset {
                RootDatum::from_preset(preset).check_prime(p).map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        let ring_strs = if flags.ring.is_empty() { file.rings.unwrap_or_default() } else { flags.ring.clone() };
        let mut rings = ring_strs.iter().map(|s| RingFamily::parse(s)).collect::<Result<Vec<_>, _>>()?;
        if rings.is_empty() {
            rings.push(RingFamily::K);
            if !primes.is_empty() {
                rings.extend([RingFamily::O, RingFamily::F]);
            }
        }
        rings.sort_unstable();
        rings.dedup();
        let needs_prime = rings.iter().any(|r| *r != RingFamily::K) || command == Command::Decomp;
        if needs_prime && primes.is_empty() && command != Command::Selftest {
            return Err(CliError::Config(format!("{} over O or F needs --prime", command.name())));
        }
        Ok(JobConfig {
            command,
            preset,
            primes,
            rings,
            out: flags.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("ptilt-out")),
            cache: if flags.no_cache { false } else { file.cache.unwrap_or(true) },
            budget_peel: flags.budget_peel.or(file.budget_peel).unwrap_or(DEFAULT_BUDGET),
            max_weyl: flags.max_weyl.or(file.max_weyl).unwrap_or(DEFAULT_WEYL_CAP),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(preset: &str) -> Flags {
        Flags { preset: Some(preset.into()), ..Flags::default() }
    }

    #[test]
    fn bad_and_torsion_primes_are_config_errors() {
        let mut f = flags("G2");
        f.prime = vec![3];
        assert!(matches!(JobConfig::resolve(Command::Pcan, &f), Err(CliError::Config(_))));
        let mut f = flags("A2");
        f.prime = vec![3];
        assert!(matches!(JobConfig::resolve(Command::Pcan, &f), Err(CliError::Config(_))));
        let mut f = flags("A2");
        f.prime = vec![4];
        assert!(matches!(JobConfig::resolve(Command::Pcan, &f), Err(CliError::Config(_))));
    }

    #[test]
    fn empty_preset_is_rejected() {
        assert!(JobConfig::resolve(Command::Klpoly, &flags("")).is_err());
        assert!(JobConfig::resolve(Command::Klpoly, &Flags::default()).is_err());
    }

    #[test]
    fn default_rings_follow_primes() {
        let mut f = flags("B2");
        assert_eq!(JobConfig::resolve(Command::Pcan, &f).unwrap().rings, vec![RingFamily::K]);
        f.prime = vec![5, 3, 5];
        let c = JobConfig::resolve(Command::Pcan, &f).unwrap();
        assert_eq!(c.primes, vec![3, 5]);
        assert_eq!(c.rings, vec![RingFamily::K, RingFamily::O, RingFamily::F]);
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.conf");
        fs::write(&path, "# job\npreset = A2\nprimes = 5, 7\nring = F\nbudget-peel = 99\ncache = false\n").unwrap();
        let f = Flags { config: Some(path.clone()), prime: vec![2], ..Flags::default() };
        let c = JobConfig::resolve(Command::Pcan, &f).unwrap();
        assert_eq!(c.preset.unwrap().to_string(), "A2");
        assert_eq!(c.primes, vec![2]);
        assert_eq!(c.rings, vec![RingFamily::F]);
        assert_eq!(c.budget_peel, 99);
        assert!(!c.cache);
        fs::write(&path, "colour = blue\n").unwrap();
        assert!(JobConfig::resolve(Command::Pcan, &f).is_err());
    }
}
