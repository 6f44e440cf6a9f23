//! Command-line front end: reads a JSON spec, runs one operation and emits a
//! JSON report (plus CSV for grid data).
//!
//! Exit codes: 0 pass, 1 fail, 2 undecided, 3 usage or spec error.

pub mod args;
mod commands;
pub mod report;
pub mod specfile;

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

pub use args::{Cli, Command};
use report::{ErrorEntry, Timing, SCHEMA};
pub use report::{RunReport, Verdict};
use specfile::{LoadError, SpecFile};

/// Result of one invocation before anything is written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub csv: Option<String>,
}

/// Parses `argv` (including the program name), runs the command, writes the
/// report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => Verdict::Usage.exit_code(),
            };
        }
    };
    let outcome = execute(&cli);
    for e in &outcome.report.errors {
        eprintln!(
            "qforms {}: {}: {}",
            outcome.report.command, e.kind, e.message
        );
    }
    if let Err(msg) = emit(&cli, &outcome) {
        eprintln!("qforms: {msg}");
        return Verdict::Usage.exit_code();
    }
    outcome.report.exit_code()
}

/// Runs the command in its own thread pool and builds the report.
pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let command = cli.command.name();
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
    let finish =
        |spec: Option<SpecFile>, verdict: Verdict, payload: Value, errors: Vec<ErrorEntry>, csv| {
            Outcome {
                report: RunReport {
                    schema: SCHEMA,
                    command: command.into(),
                    spec,
                    timing: Timing {
                        elapsed_ms: start.elapsed().as_millis() as u64,
                        threads,
                    },
                    verdict,
                    payload,
                    errors,
                },
                csv,
            }
        };
    let usage = |spec: Option<SpecFile>, msg: String| {
        finish(
            spec,
            Verdict::Usage,
            Value::Null,
            vec![ErrorEntry::usage(msg)],
            None,
        )
    };

    if threads == 0 {
        return usage(None, "--threads must be at least 1".into());
    }
    if cli.csv.is_some() && !matches!(cli.command, Command::Bounds { .. } | Command::Scan { .. }) {
        return usage(
            None,
            format!("--csv is only produced by bounds and scan, not {command}"),
        );
    }
    let file = match SpecFile::load(cli.command.spec_path()) {
        Ok(f) => f,
        Err(LoadError::Parse(msg)) if command == "validate" => {
            return finish(
                None,
                Verdict::Fail,
                serde_json::json!({ "valid": false }),
                vec![ErrorEntry {
                    kind: "MalformedSpec".into(),
                    message: msg,
                    details: Value::Null,
                }],
                None,
            );
        }
        Err(e) => return usage(None, e.to_string()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return usage(Some(file), format!("cannot start {threads} threads: {e}")),
    };
    let out = pool.install(|| commands::dispatch(&cli.command, &file));
    finish(Some(file), out.verdict, out.payload, out.errors, out.csv)
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(csv)) = (&cli.csv, &outcome.csv) {
        std::fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}
