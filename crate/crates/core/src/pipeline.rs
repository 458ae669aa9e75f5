//! Windows → networks → metrics and market variables → aligned records.

use std::io::{Read, Write};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finvars::{self, FinancialVars, ReturnConfig};
use crate::ingest::{assign_windows, Transaction, Window, WindowSpec};
use crate::netmetrics::{self, NetworkMetrics};
use crate::network::build_network;
use crate::stats::{self, describe, CorrelationTable, DescriptiveStats, Series};

/// One row per `(date, window)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    pub date: NaiveDate,
    pub window: usize,
    pub n: usize,
    pub m: usize,
    pub metrics: NetworkMetrics,
    pub financial: FinancialVars,
}

/// A column of the record series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    CkIn,
    CkOut,
    Ck,
    CsIn,
    CsOut,
    Cs,
    Ek,
    Es,
    L,
    R,
    V,
    Tau,
    W,
}

impl Variable {
    /// Column order of the network-metrics summary and correlation grid.
    pub const NETWORK: [Variable; 5] = [Variable::Ck, Variable::Cs, Variable::Ek, Variable::Es, Variable::L];
    /// Column order of the financial summary; row order of the correlation grid.
    pub const FINANCIAL: [Variable; 4] = [Variable::R, Variable::V, Variable::Tau, Variable::W];

    pub const ALL: [Variable; 13] = [
        Variable::CkIn,
        Variable::CkOut,
        Variable::Ck,
        Variable::CsIn,
        Variable::CsOut,
        Variable::Cs,
        Variable::Ek,
        Variable::Es,
        Variable::L,
        Variable::R,
        Variable::V,
        Variable::Tau,
        Variable::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::CkIn => "C_k_in",
            Variable::CkOut => "C_k_out",
            Variable::Ck => "C_k",
            Variable::CsIn => "C_s_in",
            Variable::CsOut => "C_s_out",
            Variable::Cs => "C_s",
            Variable::Ek => "e_k",
            Variable::Es => "e_s",
            Variable::L => "l",
            Variable::R => "r",
            Variable::V => "v",
            Variable::Tau => "tau",
            Variable::W => "w",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn get(self, record: &WindowRecord) -> Option<f64> {
        let m = &record.metrics;
        let f = &record.financial;
        match self {
            Variable::CkIn => m.c_k_in,
            Variable::CkOut => m.c_k_out,
            Variable::Ck => m.c_k,
            Variable::CsIn => m.c_s_in,
            Variable::CsOut => m.c_s_out,
            Variable::Cs => m.c_s,
            Variable::Ek => m.e_k,
            Variable::Es => m.e_s,
            Variable::L => m.l,
            Variable::R => f.r,
            Variable::V => f.v,
            Variable::Tau => f.tau,
            Variable::W => Some(f.w as f64),
        }
    }

    pub fn series(self, records: &[WindowRecord]) -> Series {
        records.iter().map(|r| self.get(r)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    pub returns: ReturnConfig,
    /// Fan per-window work out over the rayon pool.
    pub parallel: bool,
    /// Previous close carried in from an earlier segment of the same stream.
    pub initial_reference: Option<f64>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { returns: ReturnConfig::default(), parallel: true, initial_reference: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub records: Vec<WindowRecord>,
    /// Transactions outside every session.
    pub discarded: Vec<Transaction>,
    /// Last trade price seen, for continuing the stream in a later call.
    pub final_reference: Option<f64>,
}

pub fn analyze_window(window: &Window, prev_close: Option<f64>, returns: &ReturnConfig) -> WindowRecord {
    let net = build_network(window);
    WindowRecord {
        date: window.date,
        window: window.index,
        n: net.n(),
        m: net.m(),
        metrics: netmetrics::compute_all(&net),
        financial: finvars::compute(window, prev_close, returns.reference),
    }
}

/// Previous-close reference for each window, from one ordered pass.
fn reference_prices(windows: &[Window], options: &AnalysisOptions) -> (Vec<Option<f64>>, Option<f64>) {
    let mut carry = options.initial_reference;
    let mut last_date = windows.first().map(|w| w.date);
    let refs = windows
        .iter()
        .map(|w| {
            if options.returns.reset_daily && last_date != Some(w.date) {
                carry = None;
            }
            last_date = Some(w.date);
            let reference = carry;
            if let Some(t) = w.transactions.last() {
                carry = Some(t.price);
            }
            reference
        })
        .collect();
    (refs, carry)
}

/// Records for already-windowed data, in input order.
pub fn analyze_windows(windows: &[Window], options: &AnalysisOptions) -> (Vec<WindowRecord>, Option<f64>) {
    let (refs, final_reference) = reference_prices(windows, options);
    let records = if options.parallel {
        windows
            .par_iter()
            .zip(refs.par_iter())
            .map(|(w, &r)| analyze_window(w, r, &options.returns))
            .collect()
    } else {
        windows.iter().zip(&refs).map(|(w, &r)| analyze_window(w, r, &options.returns)).collect()
    };
    (records, final_reference)
}

/// Full pass over a transaction list: window assignment, then one record per
/// window ordered by `(date, window)`.
pub fn analyze(transactions: Vec<Transaction>, spec: &WindowSpec, options: &AnalysisOptions) -> Analysis {
    let assignment = assign_windows(transactions, spec);
    let (records, final_reference) = analyze_windows(&assignment.windows, options);
    Analysis { records, discarded: assignment.discarded, final_reference }
}

/// Row labels of both summary tables, in order.
pub const SUMMARY_ROWS: [&str; 7] = ["Mean", "Median", "Maximum", "Minimum", "Std. Dev.", "Skewness", "Kurtosis"];

/// Descriptive statistics for a set of columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub columns: Vec<Variable>,
    /// Missing when a column has fewer than two values.
    pub stats: Vec<Option<DescriptiveStats>>,
}

impl SummaryTable {
    fn compute(records: &[WindowRecord], columns: &[Variable]) -> Self {
        SummaryTable {
            columns: columns.to_vec(),
            stats: columns.iter().map(|v| describe(&v.series(records)).ok()).collect(),
        }
    }

    pub fn row_labels(&self) -> &'static [&'static str] {
        &SUMMARY_ROWS
    }

    /// Value at `(row label index, column index)`.
    pub fn value(&self, row: usize, column: usize) -> Option<f64> {
        let s = self.stats.get(column)?.as_ref()?;
        match row {
            0 => Some(s.mean),
            1 => Some(s.median),
            2 => Some(s.maximum),
            3 => Some(s.minimum),
            4 => Some(s.std_dev),
            5 => s.skewness,
            6 => s.kurtosis,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub network: SummaryTable,
    pub financial: SummaryTable,
}

pub fn summarize(records: &[WindowRecord]) -> Summary {
    Summary {
        network: SummaryTable::compute(records, &Variable::NETWORK),
        financial: SummaryTable::compute(records, &Variable::FINANCIAL),
    }
}

pub fn correlate(records: &[WindowRecord]) -> CorrelationTable {
    stats::correlation_table(records)
}

/// Header of the records file.
pub const RECORD_COLUMNS: [&str; 17] = [
    "date", "window", "n", "m", "C_k_in", "C_k_out", "C_k", "C_s_in", "C_s_out", "C_s", "e_k", "e_s", "l", "r",
    "v", "tau", "w",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes records as CSV. Each provenance line is emitted first as a `# `
/// comment. Floats use the shortest round-tripping form; missing is empty.
pub fn write_records<W: Write>(mut sink: W, records: &[WindowRecord], provenance: &[String]) -> Result<()> {
    for line in provenance {
        writeln!(sink, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(RECORD_COLUMNS)?;
    for r in records {
        let mut row = vec![r.date.format("%Y-%m-%d").to_string(), r.window.to_string(), r.n.to_string(), r.m.to_string()];
        row.extend(Variable::ALL[..12].iter().map(|v| fmt_opt(v.get(r))));
        row.push(r.financial.w.to_string());
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a file produced by [`write_records`]; `#` lines are skipped.
pub fn read_records<R: Read>(source: R) -> Result<Vec<WindowRecord>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(source);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != RECORD_COLUMNS {
        return Err(Error::MalformedRecords { line: 1, reason: format!("unexpected header {header:?}") });
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |what: &str| Error::MalformedRecords { line, reason: format!("bad {what}") };
        let opt = |i: usize| -> Result<Option<f64>> {
            let s = row.get(i).unwrap_or("");
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(RECORD_COLUMNS[i]))
            }
        };
        let date = NaiveDate::parse_from_str(&row[0], "%Y-%m-%d").map_err(|_| bad("date"))?;
        let int = |i: usize| row[i].parse::<u64>().map_err(|_| bad(RECORD_COLUMNS[i]));
        out.push(WindowRecord {
            date,
            window: int(1)? as usize,
            n: int(2)? as usize,
            m: int(3)? as usize,
            metrics: NetworkMetrics {
                c_k_in: opt(4)?,
                c_k_out: opt(5)?,
                c_k: opt(6)?,
                c_s_in: opt(7)?,
                c_s_out: opt(8)?,
                c_s: opt(9)?,
                e_k: opt(10)?,
                e_s: opt(11)?,
                l: opt(12)?,
            },
            financial: FinancialVars { r: opt(13)?, v: opt(14)?, tau: opt(15)?, w: int(16)? },
        });
    }
    Ok(out)
}
