use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::{Format, RunConfig};
use super::CliError;

/// One named check. Checks without a tolerance are informational and always pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance` (NaN fails).
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass: value <= tolerance,
        }
    }

    /// Passes when `value` lies in `[lo, hi]`; the recorded tolerance is `hi`.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(hi),
            pass: (lo..=hi).contains(&value),
        }
    }

    /// Passes when `value >= bound`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(bound),
            pass: value >= bound,
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: None,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    /// Seconds per phase; empty unless timings were requested.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(config: RunConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    value: f64,
    tolerance: Option<f64>,
    pass: bool,
}

/// Serialize the report. Identical reports give identical bytes.
pub fn emit_report(report: &RunReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            // The header is written explicitly so an empty report still has one.
            w.write_record(["name", "value", "tolerance", "pass"])
                .map_err(|e| CliError::Io(e.to_string()))?;
            let mut w = {
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(bytes)
            };
            for c in &report.checks {
                w.serialize(CsvRow {
                    name: &c.name,
                    value: c.value,
                    tolerance: c.tolerance,
                    pass: c.pass,
                })
                .map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<(), CliError> {
    let text = emit_report(report, report.config.format)?;
    fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}
