//! Suite reports, their CSV/JSON forms, and plot-ready column files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::CliError;

/// How `observed` is compared with `expected` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|observed - expected| <= tolerance`.
    Abs,
    /// `|observed - expected| <= tolerance * |expected|`.
    Rel,
    /// `observed <= tolerance`.
    AtMost,
    /// `observed >= tolerance`.
    AtLeast,
}

impl Rule {
    fn as_str(self) -> &'static str {
        match self {
            Rule::Abs => "abs",
            Rule::Rel => "rel",
            Rule::AtMost => "at_most",
            Rule::AtLeast => "at_least",
        }
    }

    pub fn holds(self, expected: f64, observed: f64, tolerance: f64) -> bool {
        match self {
            Rule::Abs => (observed - expected).abs() <= tolerance,
            Rule::Rel => (observed - expected).abs() <= tolerance * expected.abs(),
            Rule::AtMost => observed <= tolerance,
            Rule::AtLeast => observed >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub rule: Rule,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Record {
    pub fn new(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64, rule: Rule) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            tolerance,
            rule,
            pass: rule.holds(expected, observed, tolerance),
            note: String::new(),
        }
    }

    pub fn abs(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, expected, observed, tolerance, Rule::Abs)
    }

    pub fn rel(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self::new(name, expected, observed, tolerance, Rule::Rel)
    }

    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, 0.0, observed, bound, Rule::AtMost)
    }

    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, 0.0, observed, bound, Rule::AtLeast)
    }

    /// A check that could not be computed.
    pub fn failed(name: impl Into<String>, tolerance: f64, err: impl ToString) -> Self {
        Self {
            name: name.into(),
            expected: f64::NAN,
            observed: f64::NAN,
            tolerance,
            rule: Rule::Abs,
            pass: false,
            note: err.to_string(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Columns of numbers destined for `<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Outcome of one suite. The wall time is kept out of the serialized forms so
/// that reports from identical runs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<Record>,
    pub series: Vec<Series>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    seed: u64,
    name: &'a str,
    expected: f64,
    observed: f64,
    tolerance: f64,
    rule: &'a str,
    pass: bool,
    note: &'a str,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            records: Vec::new(),
            series: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(CsvRow {
                suite: &self.suite,
                seed: self.seed,
                name: &r.name,
                expected: r.expected,
                observed: r.observed,
                tolerance: r.tolerance,
                rule: r.rule.as_str(),
                pass: r.pass,
                note: &r.note,
            })
            .expect("in-memory csv");
        }
        if self.records.is_empty() {
            w.write_record(["suite", "seed", "name", "expected", "observed", "tolerance", "rule", "pass", "note"])
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes `<suite>.csv` or `<suite>.json` into `dir`.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.{format}", self.suite));
        fs::write(&path, self.render(format))?;
        Ok(path)
    }

    /// One line per record plus a verdict, for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "{} {}: expected {:.6e}, observed {:.6e}, tol {:.1e} ({}){}\n",
                if r.pass { "ok  " } else { "FAIL" },
                r.name,
                r.expected,
                r.observed,
                r.tolerance,
                r.rule.as_str(),
                if r.note.is_empty() { String::new() } else { format!(" [{}]", r.note) }
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{}: {} of {} checks passed (seed {})\n",
            self.suite,
            self.records.len() - failed,
            self.records.len(),
            self.seed
        ));
        out
    }
}

/// Files written by [`emit_plot_data`], or a warning when there was nothing to write.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput {
    pub files: Vec<PathBuf>,
    pub warning: Option<String>,
}

/// Writes every series of the report as `<name>.csv` in `dir`.
pub fn emit_plot_data(report: &SuiteReport, dir: &Path) -> Result<PlotOutput, CliError> {
    if report.records.is_empty() || report.series.iter().all(|s| s.rows.is_empty()) {
        return Ok(PlotOutput {
            files: Vec::new(),
            warning: Some(format!("{}: no plot data to write", report.suite)),
        });
    }
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for series in report.series.iter().filter(|s| !s.rows.is_empty()) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&series.columns).expect("in-memory csv");
        for row in &series.rows {
            w.write_record(row.iter().map(|x| x.to_string())).expect("in-memory csv");
        }
        let path = dir.join(format!("{}.csv", series.name));
        fs::write(&path, w.into_inner().expect("in-memory csv"))?;
        files.push(path);
    }
    Ok(PlotOutput { files, warning: None })
}
