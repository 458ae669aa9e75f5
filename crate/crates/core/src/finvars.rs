//! Per-window market variables: return, volatility, intertrade duration and
//! volume.

use serde::{Deserialize, Serialize};

use crate::ingest::Window;
use crate::time::MS_PER_SECOND;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FinancialVars {
    /// Log return.
    pub r: Option<f64>,
    /// Log price range.
    pub v: Option<f64>,
    /// Mean intertrade duration in seconds.
    pub tau: Option<f64>,
    /// Shares traded, each trade counted once.
    pub w: u64,
}

/// Which price a window's return is measured from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReturnReference {
    /// Last trade of the most recent earlier non-empty window.
    #[default]
    PreviousClose,
    /// The window's own first trade.
    WindowOpen,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReturnConfig {
    pub reference: ReturnReference,
    /// Forget the previous close at each day boundary.
    pub reset_daily: bool,
}

/// `ln(last price) - ln(reference)`; missing for an empty window or when no
/// reference exists.
pub fn window_return(window: &Window, reference: Option<f64>) -> Option<f64> {
    let last = window.transactions.last()?.price;
    let reference = reference?;
    Some(last.ln() - reference.ln())
}

/// Return under a given reference convention; `prev_close` is only read for
/// [`ReturnReference::PreviousClose`].
pub fn window_return_with(window: &Window, prev_close: Option<f64>, reference: ReturnReference) -> Option<f64> {
    match reference {
        ReturnReference::PreviousClose => window_return(window, prev_close),
        ReturnReference::WindowOpen => window_return(window, window.transactions.first().map(|t| t.price)),
    }
}

/// `max ln p - min ln p` over the window's trades.
pub fn window_volatility(window: &Window) -> Option<f64> {
    let first = window.transactions.first()?.price;
    let (lo, hi) = window
        .transactions
        .iter()
        .fold((first, first), |(lo, hi), t| (lo.min(t.price), hi.max(t.price)));
    Some(hi.ln() - lo.ln())
}

/// Mean gap between consecutive trades, in seconds. Zero gaps count.
pub fn intertrade_duration(window: &Window) -> Option<f64> {
    let txns = &window.transactions;
    if txns.len() < 2 {
        return None;
    }
    let total_ms: i64 = txns
        .windows(2)
        .map(|pair| pair[1].timestamp.millis() - pair[0].timestamp.millis())
        .sum();
    Some(total_ms as f64 / (txns.len() - 1) as f64 / MS_PER_SECOND as f64)
}

pub fn trading_volume(window: &Window) -> u64 {
    window.transactions.iter().map(|t| t.size).sum()
}

pub fn compute(window: &Window, prev_close: Option<f64>, reference: ReturnReference) -> FinancialVars {
    FinancialVars {
        r: window_return_with(window, prev_close, reference),
        v: window_volatility(window),
        tau: intertrade_duration(window),
        w: trading_volume(window),
    }
}
