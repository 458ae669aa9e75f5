//! Fixed-width text tables and delimited exports of summaries, correlations
//! and test verdicts.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pipeline::{correlate, summarize, Summary, SummaryTable, Variable, WindowRecord, SUMMARY_ROWS};
use crate::stats::{adf_test, jarque_bera, ljung_box, CorrelationTable, TestResult, DEFAULT_LJUNG_BOX_LAGS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportOptions {
    /// Run ADF, Jarque-Bera and Ljung-Box on every series.
    pub tests: bool,
    pub ljung_box_lags: usize,
    /// `None` uses the default lag rule.
    pub adf_lags: Option<usize>,
    pub level: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { tests: false, ljung_box_lags: DEFAULT_LJUNG_BOX_LAGS, adf_lags: None, level: 0.05 }
    }
}

/// Test outcomes for one series; an error string when a test could not run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTests {
    pub variable: Variable,
    pub adf: std::result::Result<TestResult, String>,
    pub jarque_bera: std::result::Result<TestResult, String>,
    pub ljung_box: std::result::Result<TestResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub windows: usize,
    pub summary: Summary,
    pub correlations: CorrelationTable,
    pub tests: Option<Vec<SeriesTests>>,
}

impl Report {
    pub fn build(records: &[WindowRecord], options: &ReportOptions) -> Self {
        let tests = options.tests.then(|| {
            Variable::NETWORK
                .iter()
                .chain(&Variable::FINANCIAL)
                .map(|&variable| {
                    let s = variable.series(records);
                    SeriesTests {
                        variable,
                        adf: adf_test(&s, options.adf_lags, options.level).map_err(|e| e.to_string()),
                        jarque_bera: jarque_bera(&s, options.level).map_err(|e| e.to_string()),
                        ljung_box: ljung_box(&s, options.ljung_box_lags, options.level).map_err(|e| e.to_string()),
                    }
                })
                .collect()
        });
        Report { windows: records.len(), summary: summarize(records), correlations: correlate(records), tests }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "Windows analyzed: {}", self.windows).unwrap();
        writeln!(out).unwrap();
        render_summary(&mut out, "Summary statistics of trading network metrics", &self.summary.network);
        writeln!(out).unwrap();
        render_summary(&mut out, "Summary statistics of financial variables", &self.summary.financial);
        writeln!(out).unwrap();
        render_correlations(&mut out, &self.correlations);
        if let Some(tests) = &self.tests {
            writeln!(out).unwrap();
            render_tests(&mut out, tests);
        }
        out
    }

    /// `table,statistic,<columns…>` for both summary tables.
    pub fn write_summary_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(sink);
        for (name, table) in [("network", &self.summary.network), ("financial", &self.summary.financial)] {
            let mut header = vec!["table".to_string(), "statistic".to_string()];
            header.extend(table.columns.iter().map(|v| v.name().to_string()));
            w.write_record(&header)?;
            for (row, label) in SUMMARY_ROWS.iter().enumerate() {
                let mut rec = vec![name.to_string(), label.to_string()];
                rec.extend((0..table.columns.len()).map(|c| table.value(row, c).map_or_else(String::new, |x| x.to_string())));
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// One line per cell: `row,column,rho,p_value,n,stars`.
    pub fn write_correlations_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["row", "column", "rho", "p_value", "n", "stars"])?;
        let t = &self.correlations;
        for (i, row) in t.rows.iter().enumerate() {
            for (j, col) in t.columns.iter().enumerate() {
                match t.cell(i, j) {
                    Some(c) => w.write_record([
                        row.clone(),
                        col.clone(),
                        c.rho.to_string(),
                        c.p_value.to_string(),
                        c.n.to_string(),
                        c.stars().to_string(),
                    ])?,
                    None => w.write_record([row.as_str(), col.as_str(), "", "", "", ""])?,
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// `series,test,statistic,p_value,critical_value,level,reject,nobs,lags,error`.
    pub fn write_tests_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["series", "test", "statistic", "p_value", "critical_value", "level", "reject", "nobs", "lags", "error"])?;
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        for st in self.tests.iter().flatten() {
            for (name, res) in [("ADF", &st.adf), ("Jarque-Bera", &st.jarque_bera), ("Ljung-Box", &st.ljung_box)] {
                let rec = match res {
                    Ok(r) => vec![
                        st.variable.name().to_string(),
                        name.to_string(),
                        r.statistic.to_string(),
                        opt(r.p_value),
                        opt(r.critical_value),
                        r.level.to_string(),
                        r.reject.to_string(),
                        r.nobs.to_string(),
                        r.lags.to_string(),
                        String::new(),
                    ],
                    Err(e) => {
                        let mut rec = vec![st.variable.name().to_string(), name.to_string()];
                        rec.extend(std::iter::repeat_n(String::new(), 7));
                        rec.push(e.clone());
                        rec
                    }
                };
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

const LABEL_WIDTH: usize = 10;
const CELL_WIDTH: usize = 13;

fn rule(out: &mut String, columns: usize) {
    out.push_str(&"=".repeat(LABEL_WIDTH + CELL_WIDTH * columns));
    out.push('\n');
}

fn fmt_value(x: f64) -> String {
    if x != 0.0 && (x.abs() >= 1e6 || x.abs() < 1e-4) {
        format!("{x:.4e}")
    } else {
        format!("{x:.4}")
    }
}

fn render_summary(out: &mut String, title: &str, table: &SummaryTable) {
    writeln!(out, "{title}").unwrap();
    rule(out, table.columns.len());
    write!(out, "{:<LABEL_WIDTH$}", "").unwrap();
    for v in &table.columns {
        write!(out, "{:>CELL_WIDTH$}", v.name()).unwrap();
    }
    out.push('\n');
    rule(out, table.columns.len());
    for (row, label) in SUMMARY_ROWS.iter().enumerate() {
        write!(out, "{label:<LABEL_WIDTH$}").unwrap();
        for c in 0..table.columns.len() {
            let cell = table.value(row, c).map_or_else(|| "NA".to_string(), fmt_value);
            write!(out, "{cell:>CELL_WIDTH$}").unwrap();
        }
        out.push('\n');
    }
    rule(out, table.columns.len());
}

fn render_correlations(out: &mut String, table: &CorrelationTable) {
    writeln!(out, "Correlations between financial variables and network metrics").unwrap();
    rule(out, table.columns.len());
    write!(out, "{:<LABEL_WIDTH$}", "").unwrap();
    for c in &table.columns {
        write!(out, "{c:>CELL_WIDTH$}").unwrap();
    }
    out.push('\n');
    rule(out, table.columns.len());
    for (i, row) in table.rows.iter().enumerate() {
        write!(out, "{row:<LABEL_WIDTH$}").unwrap();
        for j in 0..table.columns.len() {
            let cell = table
                .cell(i, j)
                .map_or_else(|| "NA   ".to_string(), |c| format!("{:.3}{:<3}", c.rho, c.stars()));
            write!(out, "{cell:>CELL_WIDTH$}").unwrap();
        }
        out.push('\n');
    }
    rule(out, table.columns.len());
    writeln!(out, "*** significant at 0.1%; ** significant at 1%; * significant at 5%.").unwrap();
}

fn render_tests(out: &mut String, tests: &[SeriesTests]) {
    writeln!(out, "Time-series tests").unwrap();
    let width = 3;
    rule(out, width * 2);
    writeln!(
        out,
        "{:<LABEL_WIDTH$}{:>w$}{:>w$}{:>w$}",
        "",
        "ADF (stat / unit root)",
        "Jarque-Bera (stat / p)",
        "Ljung-Box (Q / p)",
        w = CELL_WIDTH * 2
    )
    .unwrap();
    rule(out, width * 2);
    for st in tests {
        write!(out, "{:<LABEL_WIDTH$}", st.variable.name()).unwrap();
        let adf = match &st.adf {
            Ok(r) => format!("{:.3} / {}", r.statistic, if r.reject { "rejected" } else { "kept" }),
            Err(_) => "NA".into(),
        };
        let with_p = |res: &std::result::Result<TestResult, String>| match res {
            Ok(r) => format!("{} / {:.4}", fmt_value(r.statistic), r.p_value.unwrap_or(f64::NAN)),
            Err(_) => "NA".into(),
        };
        writeln!(
            out,
            "{adf:>w$}{:>w$}{:>w$}",
            with_p(&st.jarque_bera),
            with_p(&st.ljung_box),
            w = CELL_WIDTH * 2
        )
        .unwrap();
    }
    rule(out, width * 2);
}
