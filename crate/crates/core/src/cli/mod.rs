//! Command-line harness: configuration, check suites, and reports.

pub mod config;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use thiserror::Error as ThisError;

pub use config::{parse_config, Format, RunConfig, Scheme, Suite, OUTPUT_DIR_VAR};
pub use report::{emit_report, write_report, Check, RunReport};
pub use suites::run_suite;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("computation failed: {0}")]
    Compute(#[from] crate::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

/// Parse, run, write the report, and return the process exit code:
/// 0 when every check passes, 1 on a failed check or computation, 2 on usage
/// or I/O errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(args) {
        Ok(c) => c,
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    match execute(config) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(config: RunConfig) -> Result<bool, CliError> {
    let path = config.output_path();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        if !dir.is_dir() {
            return Err(CliError::Io(format!(
                "output directory {} does not exist",
                dir.display()
            )));
        }
    }
    let report = run_suite(config)?;
    write_report(&report, &path)?;
    let mut stdout = std::io::stdout().lock();
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(stdout, "{status} {} = {:e}", c.name, c.value);
    }
    let _ = writeln!(stdout, "report written to {}", path.display());
    Ok(report.passed())
}
