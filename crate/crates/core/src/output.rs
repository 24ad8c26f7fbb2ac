//! CSV and JSON encodings of spectra, sweep tables and error summaries.
//!
//! CSV is UTF-8 with LF line endings and a header row. Floats use Rust's
//! shortest round-trip formatting, so identical inputs give identical bytes.
//! JSON is an object `{"spec": ..., "rows": [...]}` whose row fields carry
//! the same names as the CSV columns.

use std::io::Write;

use serde::Serialize;

use crate::analysis::{ErrorEntry, ErrorSummary, SweepRow, SweepTable};
use crate::approx::{ApproxMethod, LabeledLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// A record with a fixed CSV layout.
pub trait CsvRecord {
    const HEADER: &'static [&'static str];

    fn fields(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub rank: usize,
    pub branch: Option<&'static str>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub energy: f64,
    pub energy_over_omega0: f64,
}

/// Rows for `levels` of `method`; exact levels get empty labels.
pub fn spectrum_rows(
    method: ApproxMethod,
    levels: &[LabeledLevel],
    omega0: f64,
) -> Vec<SpectrumRow> {
    let labelled = method != ApproxMethod::Exact;
    levels
        .iter()
        .enumerate()
        .map(|(rank, l)| SpectrumRow {
            rank,
            branch: labelled.then_some(l.branch.as_str()),
            n: labelled.then_some(l.n),
            energy: l.energy,
            energy_over_omega0: l.energy / omega0,
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRecord for SpectrumRow {
    const HEADER: &'static [&'static str] =
        &["rank", "branch", "N", "energy", "energy_over_omega0"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.rank.to_string(),
            opt(self.branch),
            opt(self.n),
            self.energy.to_string(),
            self.energy_over_omega0.to_string(),
        ]
    }
}

impl CsvRecord for SweepRow {
    const HEADER: &'static [&'static str] =
        &["g", "method", "rank", "branch", "N", "energy_over_omega0"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.g.to_string(),
            self.method.to_string(),
            self.rank.to_string(),
            opt(self.branch.map(|b| b.as_str())),
            opt(self.n),
            self.energy_over_omega0.to_string(),
        ]
    }
}

impl CsvRecord for ErrorEntry {
    const HEADER: &'static [&'static str] =
        &["method", "rank", "max_abs_error_over_omega0", "argmax_g"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.method.to_string(),
            self.rank.to_string(),
            self.max_abs_error_over_omega0.to_string(),
            self.argmax_g.to_string(),
        ]
    }
}

pub fn write_csv<R: CsvRecord, W: Write>(out: W, rows: &[R]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()
}

pub fn csv_string<R: CsvRecord>(rows: &[R]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

#[derive(Serialize)]
struct Document<'a, S: Serialize, R: Serialize> {
    spec: &'a S,
    rows: &'a [R],
}

pub fn json_string<S: Serialize, R: Serialize>(spec: &S, rows: &[R]) -> String {
    let mut s =
        serde_json::to_string_pretty(&Document { spec, rows }).expect("rows serialize to JSON");
    s.push('\n');
    s
}

/// Encodes `rows` with `spec` echoed in the JSON variant.
pub fn render<S: Serialize, R: CsvRecord + Serialize>(
    format: OutputFormat,
    spec: &S,
    rows: &[R],
) -> String {
    match format {
        OutputFormat::Csv => csv_string(rows),
        OutputFormat::Json => json_string(spec, rows),
    }
}

pub fn render_sweep<S: Serialize>(format: OutputFormat, spec: &S, table: &SweepTable) -> String {
    render(format, spec, &table.rows)
}

pub fn render_summary<S: Serialize>(
    format: OutputFormat,
    spec: &S,
    summary: &ErrorSummary,
) -> String {
    render(format, spec, &summary.entries)
}
