//! Batch front end: configuration, orchestration, caching and emission of
//! the `charcalc/v1` tables, plus the self-test runner.

pub mod cache;
pub mod config;
pub mod emit;
pub mod engine;
pub mod error;
pub mod selftest;

use clap::Parser;

pub use config::{Cli, Command, JobConfig};
pub use error::CliError;

/// Parses arguments, runs the command and returns the process exit code:
/// 0 when every check passed, 1 on a failed check or engine error, 2 on a
/// configuration error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match JobConfig::resolve(cli.command, &cli.flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ptilt: {e}");
            return e.exit_code();
        }
    };
    let result = if cfg.command == Command::Selftest {
        selftest::run(&cfg).map(|(outcome, reports)| {
            for r in &reports {
                println!("criterion {:>2} {:<28} {}", r.id, r.name, if r.pass { "PASS" } else { "FAIL" });
            }
            outcome
        })
    } else {
        engine::run_command(&cfg)
    };
    match result {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("ptilt: check failed: {f}");
            }
            println!("{} files written to {}", outcome.files.len(), cfg.out.display());
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("ptilt: {e}");
            e.exit_code()
        }
    }
}
