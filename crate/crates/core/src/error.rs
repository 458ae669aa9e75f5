use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// The input header does not carry a required column.
    #[error("input header has no column named `{0}`")]
    MissingHeaderColumn(String),

    #[error("invalid window spec: {0}")]
    InvalidWindowSpec(String),

    #[error("invalid scenario config: {0}")]
    InvalidScenario(String),

    #[error("unknown scenario preset `{0}`")]
    UnknownPreset(String),

    /// A statistic cannot be computed on the supplied data.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("malformed records file at line {line}: {reason}")]
    MalformedRecords { line: u64, reason: String },
}
