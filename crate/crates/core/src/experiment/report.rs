//! Trial records and their table / CSV / JSON-lines renderings.
//!
//! CSV and JSON-lines share the column order of [`CSV_COLUMNS`]; floats are
//! written with 17 significant digits so they parse back bit-exactly.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ReportFormat, Suite};
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 11] = [
    "suite",
    "trial_index",
    "seed",
    "n",
    "k",
    "l",
    "passed",
    "min_lower_margin",
    "min_upper_margin",
    "worst_residual",
    "notes",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub suite: Suite,
    pub trial_index: usize,
    /// Seed of the trial's own generator; replaying it reproduces the trial.
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub passed: bool,
    pub min_lower_margin: Option<f64>,
    pub min_upper_margin: Option<f64>,
    pub worst_residual: f64,
    pub notes: String,
}

/// Notes prefix of the oblique search record (the one arm whose failure to
/// find a witness is only a warning).
pub const OBLIQUE_ARM_PREFIX: &str = "oblique:";

impl TrialRecord {
    /// Whether a failure of this record contradicts a theorem. Everything
    /// except the oblique counterexample search arm does.
    pub fn asserts_theorem(&self) -> bool {
        !(self.suite == Suite::ObliqueCounterexample && self.notes.starts_with(OBLIQUE_ARM_PREFIX))
    }
}

/// True iff every theorem-asserting record passed.
pub fn all_theorems_hold(records: &[TrialRecord]) -> bool {
    records.iter().filter(|r| r.asserts_theorem()).all(|r| r.passed)
}

fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_float(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => float17(v),
        _ => "null".to_string(),
    }
}

fn csv_float(x: Option<f64>) -> String {
    x.map(float17).unwrap_or_default()
}

fn csv_fields(r: &TrialRecord) -> [String; 11] {
    [
        r.suite.tag().to_string(),
        r.trial_index.to_string(),
        r.seed.to_string(),
        r.n.to_string(),
        r.k.to_string(),
        r.l.to_string(),
        r.passed.to_string(),
        csv_float(r.min_lower_margin),
        csv_float(r.min_upper_margin),
        float17(r.worst_residual),
        r.notes.clone(),
    ]
}

fn json_line(r: &TrialRecord) -> String {
    let notes = serde_json::to_string(&r.notes).expect("string serializes");
    format!(
        "{{\"suite\":\"{}\",\"trial_index\":{},\"seed\":{},\"n\":{},\"k\":{},\"l\":{},\"passed\":{},\
         \"min_lower_margin\":{},\"min_upper_margin\":{},\"worst_residual\":{},\"notes\":{}}}",
        r.suite.tag(),
        r.trial_index,
        r.seed,
        r.n,
        r.k,
        r.l,
        r.passed,
        json_float(r.min_lower_margin),
        json_float(r.min_upper_margin),
        json_float(Some(r.worst_residual)),
        notes
    )
}

fn write_table<W: Write>(records: &[TrialRecord], out: &mut W) -> io::Result<()> {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
    let rows: Vec<[String; 11]> = records
        .iter()
        .map(|r| {
            [
                r.suite.tag().to_string(),
                r.trial_index.to_string(),
                r.seed.to_string(),
                r.n.to_string(),
                r.k.to_string(),
                r.l.to_string(),
                if r.passed { "yes" } else { "NO" }.to_string(),
                opt(r.min_lower_margin),
                opt(r.min_upper_margin),
                format!("{:.3e}", r.worst_residual),
                r.notes.clone(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = CSV_COLUMNS.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let last = CSV_COLUMNS.len() - 1;
    let line = |cells: &[&str]| -> String {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i == last {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<width$}  ", width = widths[i]));
            }
        }
        s.trim_end().to_string()
    };
    writeln!(out, "{}", line(&CSV_COLUMNS))?;
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        writeln!(out, "{}", line(&cells))?;
    }

    #[derive(Default)]
    struct Tally {
        passed: usize,
        total: usize,
        lower: Option<f64>,
        upper: Option<f64>,
        residual: f64,
    }
    let mut tallies: BTreeMap<Suite, Tally> = BTreeMap::new();
    for r in records {
        let t = tallies.entry(r.suite).or_default();
        t.total += 1;
        t.passed += usize::from(r.passed);
        let min = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        t.lower = min(t.lower, r.min_lower_margin);
        t.upper = min(t.upper, r.min_upper_margin);
        t.residual = t.residual.max(r.worst_residual);
    }
    writeln!(out)?;
    writeln!(out, "summary")?;
    for (suite, t) in &tallies {
        writeln!(
            out,
            "  {:<26} {:>5}/{:<5} passed ({:6.2}%)  worst lower margin {:>10}  worst upper margin {:>10}  worst residual {:.3e}",
            suite.tag(),
            t.passed,
            t.total,
            100.0 * t.passed as f64 / t.total as f64,
            opt(t.lower),
            opt(t.upper),
            t.residual
        )?;
    }
    Ok(())
}

/// Renders `records` to `out` in the requested format.
pub fn write_report<W: Write>(records: &[TrialRecord], format: ReportFormat, out: &mut W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Contract("no records to report".into()));
    }
    let io_err = |e: io::Error| Error::io("<report>", e);
    match format {
        ReportFormat::Table => write_table(records, out).map_err(io_err)?,
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let to_err = |e: csv::Error| Error::io("<report>", io::Error::other(e));
            w.write_record(CSV_COLUMNS).map_err(to_err)?;
            for r in records {
                w.write_record(csv_fields(r)).map_err(to_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        ReportFormat::JsonLines => {
            for r in records {
                writeln!(out, "{}", json_line(r)).map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit_report(records: &[TrialRecord], format: ReportFormat, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut out = open_output(p)?;
            write_report(records, format, &mut out).map_err(|e| with_path(e, p))
        }
        None => write_report(records, format, &mut io::stdout().lock()),
    }
}

/// Opens (truncating) a report destination.
pub fn open_output(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub(crate) fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    }
}

/// Parses records written in the JSON-lines format.
pub fn parse_json_lines(text: &str) -> Result<Vec<TrialRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
