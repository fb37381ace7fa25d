//! Verification suites for the `amphase` library, as used by the `amphase`
//! binary.
//!
//! Exit codes: 0 when every case meets its expected outcome, 1 when a
//! verification fails, 2 on configuration or I/O errors.

pub mod args;
pub mod config;
pub mod output;
pub mod report;
pub mod suites;

use std::path::PathBuf;

pub use config::RunConfig;
pub use report::{CaseReport, Check, SuiteReport, Verdict};
pub use suites::{execute, RunOutput};

use args::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Setup(amphase::Error),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("cannot serialise output: {0}")]
    Output(String),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Runs a command end to end and returns the process exit code.
pub fn run(cli: &args::Cli) -> Result<i32, CliError> {
    let cfg = RunConfig::from_command(&cli.command)?;
    let out = execute(&cfg)?;
    let text = match cfg.format {
        Format::Json => output::to_json(&out.report)?,
        Format::Csv => output::to_csv(&out.report)?,
    };
    output::emit(&text, cfg.out.as_deref())?;
    if let (Some(path), Some(table)) = (cfg.samples.as_deref(), out.samples.as_ref()) {
        output::emit(&output::samples_to_csv(table)?, Some(path))?;
    }
    let failed = out.report.cases.iter().filter(|c| !c.pass).count();
    eprintln!(
        "{} case(s), {} failed, verdict {}",
        out.report.cases.len(),
        failed,
        if out.report.passed() { "pass" } else { "fail" }
    );
    Ok(if out.report.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}
