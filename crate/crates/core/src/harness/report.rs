//! Run records and their on-disk forms: a TOML summary plus per-n trace rows
//! as CSV or JSON.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificates::{sandwich_holds, CaseTag, CertificateSample, Regime};

use super::config::Mode;

pub const CSV_HEADER: [&str; 9] = ["n", "a", "b", "dd", "mu", "xi", "k", "case", "s_n"];

/// Relative slack used when re-validating rows read back from disk.
pub const ROW_CHECK_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub dd: f64,
    pub mu: f64,
    pub xi: f64,
    pub k: f64,
    pub case: CaseTag,
    pub s_n: f64,
}

impl From<&CertificateSample> for TraceRow {
    fn from(s: &CertificateSample) -> Self {
        TraceRow { n: s.n, a: s.a, b: s.b, dd: s.dd, mu: s.mu, xi: s.xi, k: s.k, case: s.case_tag, s_n: s.s }
    }
}

impl TraceRow {
    /// Checks the row against the invariants every emitted row satisfies.
    pub fn validate(&self) -> Result<(), String> {
        let finite = [self.a, self.b, self.dd, self.mu, self.xi, self.k, self.s_n];
        if finite.iter().any(|v| v.is_nan()) {
            return Err("NaN field".into());
        }
        if self.a < 0.0 || self.b < 0.0 || self.dd < 0.0 {
            return Err("negative distance".into());
        }
        if !sandwich_holds(self.a, self.b, self.dd, ROW_CHECK_REL) {
            return Err(format!("sandwich violated: a = {}, b = {}, dd = {}", self.a, self.b, self.dd));
        }
        if self.xi < 0.0 {
            return Err(format!("negative slack {}", self.xi));
        }
        if !(-1.0..=1.0).contains(&self.mu) {
            return Err(format!("mu = {} outside [-1, 1]", self.mu));
        }
        if self.k < 0.0 {
            return Err(format!("negative factor {}", self.k));
        }
        let regime_ok = self.case.regime() == Regime::of(self.a, self.b);
        let sign_ok = matches!(self.case, CaseTag::A | CaseTag::B) == (self.mu >= 0.0);
        if !regime_ok || !sign_ok {
            return Err(format!(
                "case {} inconsistent with a = {}, b = {}, mu = {}",
                self.case, self.a, self.b, self.mu
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportSection {
    pub label: String,
    pub verdict: String,
    pub achieved: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scalars: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, Vec<f64>>,
    #[serde(skip)]
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub config_digest: String,
    pub mode: Mode,
    pub verdict: String,
    pub achieved: bool,
    pub sections: Vec<ReportSection>,
}

impl ReportRecord {
    /// TOML summary without the trace rows.
    pub fn summary_toml(&self) -> String {
        toml::to_string(self).expect("reports always serialize")
    }

    pub fn rows(&self) -> impl Iterator<Item = &TraceRow> {
        self.sections.iter().flat_map(|s| s.rows.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceFormat {
    #[default]
    Csv,
    Json,
}

impl TraceFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TraceFormat::Csv => "csv",
            TraceFormat::Json => "json",
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: io::Write>(rows: &[TraceRow], out: W) -> Result<(), TraceError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            float(r.a),
            float(r.b),
            float(r.dd),
            float(r.mu),
            float(r.xi),
            float(r.k),
            r.case.to_string(),
            float(r.s_n),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[TraceRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is ascii")
}

/// Parses and re-validates every row. Floats go through `str::parse`, which
/// reads the 17-digit form back exactly.
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<TraceRow>, TraceError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(TraceError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |message: String| TraceError::Row { row: i + 1, message };
        let f = |k: usize| -> Result<f64, TraceError> {
            rec[k].parse::<f64>().map_err(|e| bad(format!("column {}: {e}", CSV_HEADER[k])))
        };
        let row = TraceRow {
            n: rec[0].parse().map_err(|e| bad(format!("column n: {e}")))?,
            a: f(1)?,
            b: f(2)?,
            dd: f(3)?,
            mu: f(4)?,
            xi: f(5)?,
            k: f(6)?,
            case: rec[7].parse().map_err(bad)?,
            s_n: f(8)?,
        };
        row.validate().map_err(bad)?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_json<W: io::Write>(rows: &[TraceRow], out: W) -> Result<(), TraceError> {
    serde_json::to_writer_pretty(out, rows)?;
    Ok(())
}

pub fn read_json<R: io::Read>(input: R) -> Result<Vec<TraceRow>, TraceError> {
    let rows: Vec<TraceRow> = serde_json::from_reader(input)?;
    for (i, row) in rows.iter().enumerate() {
        row.validate().map_err(|message| TraceError::Row { row: i + 1, message })?;
    }
    Ok(rows)
}

/// Writes `report.toml` and one trace file per section into `dir`.
pub fn write_outputs(report: &ReportRecord, dir: &Path, format: TraceFormat) -> Result<Vec<PathBuf>, TraceError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let summary = dir.join("report.toml");
    fs::write(&summary, report.summary_toml())?;
    written.push(summary);
    for section in &report.sections {
        let path = dir.join(format!("trace_{}.{}", section.label, format.extension()));
        let file = io::BufWriter::new(fs::File::create(&path)?);
        match format {
            TraceFormat::Csv => write_csv(&section.rows, file)?,
            TraceFormat::Json => write_json(&section.rows, file)?,
        }
        written.push(path);
    }
    Ok(written)
}
