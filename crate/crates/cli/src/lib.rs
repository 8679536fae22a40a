//! Verification suites for `valgeo` with CSV/JSON reports and plot-ready data.

pub mod config;
pub mod error;
pub mod report;
pub mod suites;

use std::path::PathBuf;

pub use config::{Format, RunConfig};
pub use error::CliError;
pub use report::{emit_plot_data, PlotOutput, Record, Rule, Series, SuiteReport};
pub use suites::{run_suite, SUITES};

/// Runs a suite and, when `cfg.out` is set, writes its report and plot files.
pub fn run_and_write(name: &str, cfg: &RunConfig) -> Result<(SuiteReport, Vec<PathBuf>, Option<String>), CliError> {
    let report = run_suite(name, cfg)?;
    let mut files = Vec::new();
    let mut warning = None;
    if let Some(dir) = &cfg.out {
        files.push(report.write(dir, cfg.format)?);
        let plots = emit_plot_data(&report, &dir.join(format!("{name}_data")))?;
        files.extend(plots.files);
        warning = plots.warning;
    }
    Ok((report, files, warning))
}
