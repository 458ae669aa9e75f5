//! Trading-network analytics over transaction streams.
//!
//! A stream of matched trades is cut into fixed intraday windows. Each window
//! becomes a directed multigraph of traders (seller → buyer, weighted by trade
//! size), from which centralization, assortativity and path-length metrics are
//! computed alongside return, volatility, intertrade duration and volume. The
//! resulting per-window series feed descriptive statistics, a small battery of
//! time-series tests, and a significance-starred correlation grid.
//!
//! ```no_run
//! use tradenet_core::{pipeline, synth, WindowSpec};
//!
//! let config = synth::preset("dominating-buyer").unwrap();
//! let trades = synth::generate(&config).unwrap();
//! let analysis = pipeline::analyze(trades, &WindowSpec::default(), &Default::default());
//! let grid = pipeline::correlate(&analysis.records);
//! println!("{}", grid.cell(0, 0).map_or(0.0, |c| c.rho));
//! ```

pub mod error;
pub mod finvars;
pub mod ingest;
pub mod netmetrics;
pub mod network;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod synth;
pub mod time;

pub use error::{Error, Result};
pub use finvars::FinancialVars;
pub use ingest::{Transaction, Window, WindowSpec};
pub use netmetrics::NetworkMetrics;
pub use network::TradingNetwork;
pub use pipeline::WindowRecord;
pub use time::Timestamp;
