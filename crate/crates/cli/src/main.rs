//! `tradenet`: generate synthetic order flow, turn transaction files into
//! per-window records, and report summaries, correlations and tests.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error.

mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tradenet_core::finvars::ReturnReference;
use tradenet_core::ingest::{parse_transactions, write_rejections, write_transactions, ParseOptions};
use tradenet_core::pipeline::{self, AnalysisOptions};
use tradenet_core::report::Report;
use tradenet_core::synth::{self, ScenarioConfig};
use tradenet_core::Transaction;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<tradenet_core::Error> for CliError {
    fn from(e: tradenet_core::Error) -> Self {
        use tradenet_core::Error as E;
        match e {
            E::InvalidWindowSpec(_) | E::InvalidScenario(_) | E::UnknownPreset(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

#[derive(Parser, Debug)]
#[command(name = "tradenet", version, about = "Per-window trading networks from transaction streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long, short = 'c')]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic transaction file and a manifest.
    Generate {
        #[command(flatten)]
        common: Common,
        /// One of: baseline, dominating-buyer, activity-waves, motif-bursts.
        #[arg(long, short = 'p')]
        preset: Option<String>,
        #[arg(long)]
        days: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build per-window records from transaction files.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Transaction files (comma or tab separated, with header).
        inputs: Vec<PathBuf>,
        #[arg(long)]
        window_seconds: Option<u32>,
        /// Keep prints stamped exactly at a session close.
        #[arg(long)]
        close_inclusive: bool,
        #[arg(long, value_enum)]
        return_reference: Option<Reference>,
        /// Do not carry the previous close across days.
        #[arg(long)]
        reset_daily: bool,
        /// Analyze windows on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Summary tables, correlation grid and optional tests for a records file.
    Report {
        #[command(flatten)]
        common: Common,
        /// Records file written by `analyze`.
        records: Option<PathBuf>,
        /// Run ADF, Jarque-Bera and Ljung-Box on every series.
        #[arg(long)]
        tests: bool,
        /// Ljung-Box lags.
        #[arg(long)]
        lags: Option<usize>,
        /// ADF lag order.
        #[arg(long)]
        adf_lags: Option<usize>,
        #[arg(long)]
        level: Option<f64>,
        /// Do not print the text report.
        #[arg(long, short = 'q')]
        quiet: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Reference {
    PreviousClose,
    WindowOpen,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => {
                    eprintln!("error: {msg}\n");
                    let _ = Cli::command().write_long_help(&mut io::stderr());
                }
                CliError::Data(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { common, preset, days, seed } => {
            let mut cfg = load(&common)?;
            if preset.is_some() {
                cfg.generator.preset = preset;
            }
            if days.is_some() {
                cfg.generator.days = days;
            }
            if seed.is_some() {
                cfg.seed = seed;
            }
            cmd_generate(&cfg)
        }
        Command::Analyze { common, inputs, window_seconds, close_inclusive, return_reference, reset_daily, serial } => {
            let mut cfg = load(&common)?;
            if !inputs.is_empty() {
                cfg.inputs = inputs;
            }
            if let Some(secs) = window_seconds {
                let mut spec: tradenet_core::ingest::WindowSpecConfig = cfg.window.clone().into();
                spec.window_seconds = secs;
                cfg.window = spec.try_into()?;
            }
            if close_inclusive {
                cfg.window = cfg.window.with_close_inclusive(true);
            }
            if let Some(r) = return_reference {
                cfg.returns.reference = match r {
                    Reference::PreviousClose => ReturnReference::PreviousClose,
                    Reference::WindowOpen => ReturnReference::WindowOpen,
                };
            }
            cfg.returns.reset_daily |= reset_daily;
            cfg.output.parallel &= !serial;
            cmd_analyze(&cfg)
        }
        Command::Report { common, records, tests, lags, adf_lags, level, quiet } => {
            let mut cfg = load(&common)?;
            if let Some(path) = records {
                cfg.inputs = vec![path];
            }
            cfg.tests.enabled |= tests;
            if let Some(l) = lags {
                cfg.tests.ljung_box_lags = l;
            }
            if adf_lags.is_some() {
                cfg.tests.adf_lags = adf_lags;
            }
            if let Some(level) = level {
                cfg.tests.level = level;
            }
            cfg.output.print_report &= !quiet;
            cmd_report(&cfg)
        }
    }
}

/// Creates the output directory and echoes the effective configuration there.
fn prepare_output(cfg: &RunConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.output_dir).map_err(|e| io_error(&cfg.output_dir, e))?;
    let path = cfg.output_dir.join("run-config.toml");
    fs::write(&path, cfg.to_toml()?).map_err(|e| io_error(&path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn with_provenance<W: Write>(mut sink: W, lines: &[String]) -> Result<W, CliError> {
    for line in lines {
        writeln!(sink, "# {line}").map_err(|e| CliError::Data(e.to_string()))?;
    }
    Ok(sink)
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: String,
    config_sha256: String,
    preset: &'a str,
    seed: u64,
    days: u32,
    first_day: String,
    last_day: String,
    transactions: usize,
    windows: usize,
    dominated_windows: usize,
    burst_windows: usize,
    scenario: &'a ScenarioConfig,
}

fn cmd_generate(cfg: &RunConfig) -> Result<(), CliError> {
    let scenario = cfg.scenario()?;
    let generated = synth::generate_with_plan(&scenario)?;
    prepare_output(cfg)?;

    let txn_path = cfg.output_dir.join("transactions.csv");
    let mut sink = create(&txn_path)?;
    write_transactions(&mut sink, &generated.transactions)?;
    sink.flush().map_err(|e| io_error(&txn_path, e))?;

    let days = scenario.trading_days();
    let manifest = Manifest {
        tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        config_sha256: cfg.hash()?,
        preset: cfg.generator.preset.as_deref().unwrap_or_default(),
        seed: scenario.seed,
        days: scenario.days,
        first_day: days.first().map(ToString::to_string).unwrap_or_default(),
        last_day: days.last().map(ToString::to_string).unwrap_or_default(),
        transactions: generated.transactions.len(),
        windows: generated.plans.len(),
        dominated_windows: generated.plans.iter().filter(|p| p.dominance.is_some()).count(),
        burst_windows: generated.plans.iter().filter(|p| p.burst.is_some()).count(),
        scenario: &scenario,
    };
    let manifest_path = cfg.output_dir.join("manifest.toml");
    let text = toml::to_string(&manifest).map_err(|e| CliError::Usage(format!("manifest does not serialize: {e}")))?;
    fs::write(&manifest_path, text).map_err(|e| io_error(&manifest_path, e))?;

    println!(
        "wrote {} transactions over {} days to {}",
        manifest.transactions,
        manifest.days,
        txn_path.display()
    );
    println!("manifest: {}", manifest_path.display());
    Ok(())
}

fn read_input(path: &Path, index: usize, cfg: &RunConfig) -> Result<Vec<Transaction>, CliError> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        eprintln!("warning: {} is empty", path.display());
        return Ok(Vec::new());
    }
    let report = parse_transactions(bytes.as_slice(), &ParseOptions::default())?;
    let name = if cfg.inputs.len() == 1 { "rejections.csv".to_string() } else { format!("rejections-{}.csv", index + 1) };
    let rej_path = cfg.output_dir.join(name);
    let mut sink = create(&rej_path)?;
    write_rejections(&mut sink, &report.rejections)?;
    sink.flush().map_err(|e| io_error(&rej_path, e))?;
    println!(
        "{}: {} rows, {} accepted, {} rejected (rejections: {})",
        path.display(),
        report.rows(),
        report.transactions.len(),
        report.rejections.len(),
        rej_path.display()
    );
    Ok(report.transactions)
}

fn cmd_analyze(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.inputs.is_empty() {
        return Err(CliError::Usage("no input files given".into()));
    }
    prepare_output(cfg)?;
    let mut transactions = Vec::new();
    for (i, path) in cfg.inputs.iter().enumerate() {
        transactions.extend(read_input(path, i, cfg)?);
    }
    if transactions.is_empty() {
        eprintln!("warning: no transactions accepted; only configured trading days produce (empty) windows");
    }

    let options = AnalysisOptions { returns: cfg.returns, parallel: cfg.output.parallel, initial_reference: None };
    let analysis = pipeline::analyze(transactions, &cfg.window, &options);
    if !analysis.discarded.is_empty() {
        eprintln!("warning: {} transactions fall outside the trading sessions and were dropped", analysis.discarded.len());
    }
    let empty = analysis.records.iter().filter(|r| r.m == 0).count();
    if empty > 0 {
        eprintln!("warning: {empty} of {} windows are empty", analysis.records.len());
    }

    let path = cfg.output_dir.join("records.csv");
    let mut sink = create(&path)?;
    pipeline::write_records(&mut sink, &analysis.records, &cfg.provenance()?)?;
    sink.flush().map_err(|e| io_error(&path, e))?;
    println!("wrote {} window records to {}", analysis.records.len(), path.display());
    Ok(())
}

fn cmd_report(cfg: &RunConfig) -> Result<(), CliError> {
    let [input] = cfg.inputs.as_slice() else {
        return Err(CliError::Usage("report takes exactly one records file".into()));
    };
    let file = File::open(input).map_err(|e| io_error(input, e))?;
    let records = pipeline::read_records(io::BufReader::new(file))?;
    prepare_output(cfg)?;

    let report = Report::build(&records, &cfg.report_options());
    let provenance = cfg.provenance()?;
    let text = report.render_text();

    let text_path = cfg.output_dir.join("report.txt");
    let mut sink = with_provenance(create(&text_path)?, &provenance)?;
    sink.write_all(text.as_bytes()).and_then(|()| sink.flush()).map_err(|e| io_error(&text_path, e))?;

    let summary_path = cfg.output_dir.join("summary.csv");
    let mut sink = with_provenance(create(&summary_path)?, &provenance)?;
    report.write_summary_csv(&mut sink)?;
    sink.flush().map_err(|e| io_error(&summary_path, e))?;

    let corr_path = cfg.output_dir.join("correlations.csv");
    let mut sink = with_provenance(create(&corr_path)?, &provenance)?;
    report.write_correlations_csv(&mut sink)?;
    sink.flush().map_err(|e| io_error(&corr_path, e))?;

    if report.tests.is_some() {
        let tests_path = cfg.output_dir.join("tests.csv");
        let mut sink = with_provenance(create(&tests_path)?, &provenance)?;
        report.write_tests_csv(&mut sink)?;
        sink.flush().map_err(|e| io_error(&tests_path, e))?;
    }

    if cfg.output.print_report {
        print!("{text}");
    }
    Ok(())
}
