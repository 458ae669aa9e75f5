//! Transaction records: parsing, writing, and assignment to intraday windows.

mod parse;
mod window;

pub use parse::{
    parse_transactions, write_rejections, write_transactions, ColumnMapping, ParseOptions,
    ParseReport, RejectReason, Rejection,
};
pub use window::{assign_windows, SessionInterval, Window, WindowAssignment, WindowSpec, WindowSpecConfig};

use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Buy => "B",
            Side::Sell => "S",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "B" | "b" | "BUY" | "Buy" | "buy" => Some(Side::Buy),
            "S" | "s" | "SELL" | "Sell" | "sell" => Some(Side::Sell),
            _ => None,
        }
    }
}

/// One matched trade.
#[derive(Debug, Clone, PartialEq)]
pub struct Transaction {
    pub txn_id: String,
    pub buyer_id: String,
    pub seller_id: String,
    pub timestamp: Timestamp,
    /// Positive, in quote currency.
    pub price: f64,
    /// Positive number of shares.
    pub size: u64,
    /// Recorded for completeness; no computation reads it.
    pub side: Option<Side>,
}

impl Transaction {
    pub fn new(
        txn_id: impl Into<String>,
        timestamp: Timestamp,
        buyer_id: impl Into<String>,
        seller_id: impl Into<String>,
        price: f64,
        size: u64,
    ) -> Self {
        Transaction {
            txn_id: txn_id.into(),
            buyer_id: buyer_id.into(),
            seller_id: seller_id.into(),
            timestamp,
            price,
            size,
            side: None,
        }
    }

    /// Canonical ordering key: timestamp, then txn id.
    pub fn sort_key(&self) -> (Timestamp, &str) {
        (self.timestamp, &self.txn_id)
    }
}
