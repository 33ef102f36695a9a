//! The `chainforge` command line.
//!
//! Results go to standard output as JSON (JSONL for scans, CSV for fidelity
//! tables), a one-line summary goes to standard error. Exit status is 0 on
//! success, 2 when a check ran and came out negative, 1 on bad input.

mod args;
mod commands;
mod manifest;
mod repro;

use std::ffi::OsString;

use clap::Parser;
use serde_json::Value;

pub use args::Cli;
pub use commands::fidelity_rows;
pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

/// What a finished invocation produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) struct CliError(pub String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub(crate) enum Body {
    Json(Value),
    Lines(Vec<Value>),
    Text(String),
}

pub(crate) struct Report {
    pub body: Body,
    pub negative: bool,
    pub summary: String,
}

impl Report {
    pub fn ok(v: Value, summary: impl Into<String>) -> Self {
        Report { body: Body::Json(v), negative: false, summary: summary.into() }
    }

    pub fn negative(v: Value, summary: impl Into<String>) -> Self {
        Report { body: Body::Json(v), negative: true, summary: summary.into() }
    }

    /// Exit 0 or 2 depending on `ok`.
    pub fn verdict(ok: bool, v: Value, summary: impl Into<String>) -> Self {
        Report { body: Body::Json(v), negative: !ok, summary: summary.into() }
    }
}

pub(crate) type CmdResult = Result<Report, CliError>;

/// Worker count from `--workers`, else `CHAINFORGE_WORKERS`, else rayon's
/// default.
fn worker_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("CHAINFORGE_WORKERS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError(format!("CHAINFORGE_WORKERS must be a positive integer, got {s:?}"))),
        _ => Ok(None),
    }
}

fn render(body: &Body) -> String {
    match body {
        Body::Json(v) => format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
        Body::Lines(vs) => vs.iter().map(|v| format!("{v}\n")).collect(),
        Body::Text(s) => s.clone(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Output { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Output { code: EXIT_ERROR, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut ctx = commands::Context::default();
    let outcome = (|| -> CmdResult {
        let workers = worker_count(cli.workers)?;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            if n == 0 {
                return Err(CliError("worker count must be at least 1".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError(e.to_string()))?;
        pool.install(|| commands::dispatch(&cli.command, &mut ctx))
    })();
    let out = match outcome {
        Ok(report) => Output {
            code: if report.negative { EXIT_NEGATIVE } else { EXIT_OK },
            stdout: render(&report.body),
            stderr: format!("{}\n", report.summary),
        },
        Err(CliError(msg)) => Output { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest::new(&argv, &cli, &ctx, &out);
        if let Err(e) = m.write(path) {
            return Output { code: EXIT_ERROR, stdout: out.stdout, stderr: format!("{}error: manifest: {e}\n", out.stderr) };
        }
    }
    out
}
