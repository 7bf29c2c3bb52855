use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// One repetition of one experiment. Metric columns not produced by the task
/// are left empty; every metric comes with its unattacked baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub task: String,
    pub algorithm: String,
    pub dataset: String,
    pub mode: String,
    pub pn: usize,
    pub qn: usize,
    pub pop_size: usize,
    pub iterations: usize,
    pub budget: usize,
    pub seed: u64,
    pub wall_time_s: f64,
    pub best_fitness: f64,
    pub baseline_q: Option<f64>,
    pub attacked_q: Option<f64>,
    pub baseline_nmi: Option<f64>,
    pub attacked_nmi: Option<f64>,
    pub baseline_mcn: Option<f64>,
    pub attacked_mcn: Option<f64>,
    pub baseline_pc: Option<f64>,
    pub attacked_pc: Option<f64>,
    pub baseline_auc: Option<f64>,
    pub attacked_auc: Option<f64>,
    pub baseline_precision: Option<f64>,
    pub attacked_precision: Option<f64>,
}

/// Columns that hold timings and so differ between identical runs.
pub const TIMING_COLUMNS: [&str; 1] = ["wall_time_s"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Table,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "table" | "aligned-table" => Ok(Self::Table),
            other => Err(BenchError::Config(format!(
                "unknown report format '{other}'"
            ))),
        }
    }
}

fn header() -> Vec<String> {
    // serde field order is the declaration order
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(ResultRow::placeholder())
        .expect("in-memory write");
    let text = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    text.lines()
        .next()
        .unwrap_or_default()
        .split(',')
        .map(str::to_owned)
        .collect()
}

impl ResultRow {
    fn placeholder() -> Self {
        Self {
            task: String::new(),
            algorithm: String::new(),
            dataset: String::new(),
            mode: String::new(),
            pn: 0,
            qn: 0,
            pop_size: 0,
            iterations: 0,
            budget: 0,
            seed: 0,
            wall_time_s: 0.0,
            best_fitness: 0.0,
            baseline_q: None,
            attacked_q: None,
            baseline_nmi: None,
            attacked_nmi: None,
            baseline_mcn: None,
            attacked_mcn: None,
            baseline_pc: None,
            attacked_pc: None,
            baseline_auc: None,
            attacked_auc: None,
            baseline_precision: None,
            attacked_precision: None,
        }
    }
}

pub fn to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header())?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if found != header() {
        return Err(BenchError::Config(format!(
            "unexpected CSV header: {}",
            found.join(",")
        )));
    }
    Ok(r.deserialize()
        .collect::<Result<Vec<ResultRow>, csv::Error>>()?)
}

/// Space-aligned table; each column is as wide as its longest cell.
pub fn to_table(rows: &[ResultRow]) -> Result<String> {
    let csv_text = to_csv(rows)?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv_text.as_bytes());
    let cells: Vec<Vec<String>> = r
        .records()
        .map(|rec| {
            rec.map(|rec| {
                rec.iter()
                    .map(|c| {
                        if c.is_empty() {
                            "-".to_owned()
                        } else {
                            c.to_owned()
                        }
                    })
                    .collect()
            })
        })
        .collect::<Result<_, _>>()?;
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|j| {
            cells
                .iter()
                .map(|row| row[j].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    Ok(out)
}

pub fn render(rows: &[ResultRow], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => to_csv(rows),
        ReportFormat::Table => to_table(rows),
    }
}
