//! Command-line front end: configuration, suites and JSON reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

use crate::error::Error;
pub use config::{Command, RunConfig};
use report::{ErrorBody, ErrorReport, Report};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse(_) => EXIT_CONFIG,
        Error::QuadratureNotConverged(_)
        | Error::NonConvergentRemainder(_)
        | Error::FockTruncationTooSmall(_)
        | Error::DepthTooShallow { .. } => EXIT_NUMERIC,
        _ => EXIT_CHECK_FAILED,
    }
}

fn kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(['(', ' ', '{']).next().unwrap_or("").to_string()
}

/// Runs a validated configuration; returns the JSON text and exit code.
pub fn run(cfg: &RunConfig) -> (String, i32) {
    match execute(cfg) {
        Ok(rep) => {
            let code = if rep.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            (to_text(&json!(rep)), code)
        }
        Err(e) => error_text(&e),
    }
}

pub fn error_text(e: &Error) -> (String, i32) {
    let code = exit_code(e);
    let rep = ErrorReport {
        schema: config::SCHEMA,
        error: ErrorBody {
            kind: kind(e),
            message: e.to_string(),
            exit_code: code,
        },
    };
    (to_text(&json!(rep)), code)
}

fn to_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn execute(cfg: &RunConfig) -> crate::Result<Report> {
    let cmd = cfg.validate()?;
    let (result, checks) = match cmd {
        Command::Verify => {
            let suite = cfg.suite.unwrap_or(config::Suite::All);
            let checks = suites::run_suite(suite, cfg)?;
            (json!({"suite": suite}), checks)
        }
        Command::Trace => commands::trace(cfg)?,
        Command::Char => commands::char(cfg)?,
        Command::Index => commands::index_cmd(cfg)?,
    };
    let passed = checks.iter().all(|c| c.pass);
    Ok(Report {
        schema: config::SCHEMA,
        command: cmd.name().to_string(),
        config: json!(cfg),
        result,
        checks,
        passed,
    })
}
