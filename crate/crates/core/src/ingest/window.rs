use std::collections::BTreeSet;

use chrono::{NaiveDate, NaiveTime, Timelike};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Transaction;
use crate::error::{Error, Result};
use crate::time::{parse_clock, Timestamp, MS_PER_SECOND};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionInterval {
    pub open: NaiveTime,
    pub close: NaiveTime,
}

impl SessionInterval {
    fn open_ms(&self) -> i64 {
        clock_ms(self.open)
    }

    fn close_ms(&self) -> i64 {
        clock_ms(self.close)
    }
}

fn clock_ms(t: NaiveTime) -> i64 {
    i64::from(t.num_seconds_from_midnight()) * MS_PER_SECOND + i64::from(t.nanosecond() / 1_000_000)
}

/// Intraday session calendar cut into equal windows.
///
/// Sessions are half-open `[open, close)`. With `close_inclusive` set, a print
/// stamped exactly at a session close is kept in that session's last window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WindowSpecConfig", into = "WindowSpecConfig")]
pub struct WindowSpec {
    sessions: Vec<SessionInterval>,
    window_ms: i64,
    close_inclusive: bool,
    trading_days: Vec<NaiveDate>,
}

/// On-disk shape of [`WindowSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowSpecConfig {
    /// `[["09:30", "11:30"], ["13:00", "15:00"]]`
    pub sessions: Vec<(String, String)>,
    pub window_seconds: u32,
    pub close_inclusive: bool,
    /// Days to materialize even when they carry no transactions.
    pub trading_days: Vec<NaiveDate>,
}

impl Default for WindowSpecConfig {
    fn default() -> Self {
        WindowSpec::default().into()
    }
}

impl TryFrom<WindowSpecConfig> for WindowSpec {
    type Error = Error;

    fn try_from(cfg: WindowSpecConfig) -> Result<Self> {
        let sessions = cfg
            .sessions
            .iter()
            .map(|(o, c)| {
                let open = parse_clock(o).ok_or_else(|| Error::InvalidWindowSpec(format!("bad clock time `{o}`")))?;
                let close = parse_clock(c).ok_or_else(|| Error::InvalidWindowSpec(format!("bad clock time `{c}`")))?;
                Ok(SessionInterval { open, close })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut spec = WindowSpec::new(sessions, i64::from(cfg.window_seconds) * MS_PER_SECOND)?;
        spec.close_inclusive = cfg.close_inclusive;
        spec.trading_days = cfg.trading_days;
        spec.trading_days.sort();
        spec.trading_days.dedup();
        Ok(spec)
    }
}

impl From<WindowSpec> for WindowSpecConfig {
    fn from(spec: WindowSpec) -> Self {
        let fmt = |t: NaiveTime| t.format("%H:%M:%S").to_string();
        WindowSpecConfig {
            sessions: spec.sessions.iter().map(|s| (fmt(s.open), fmt(s.close))).collect(),
            window_seconds: (spec.window_ms / MS_PER_SECOND) as u32,
            close_inclusive: spec.close_inclusive,
            trading_days: spec.trading_days,
        }
    }
}

impl Default for WindowSpec {
    /// 09:30–11:30 and 13:00–15:00 in five-minute windows: 48 per day.
    fn default() -> Self {
        let t = |h, m| NaiveTime::from_hms_opt(h, m, 0).unwrap();
        WindowSpec::new(
            vec![
                SessionInterval { open: t(9, 30), close: t(11, 30) },
                SessionInterval { open: t(13, 0), close: t(15, 0) },
            ],
            300 * MS_PER_SECOND,
        )
        .expect("default spec is valid")
    }
}

impl WindowSpec {
    pub fn new(sessions: Vec<SessionInterval>, window_ms: i64) -> Result<Self> {
        if sessions.is_empty() {
            return Err(Error::InvalidWindowSpec("no sessions".into()));
        }
        if window_ms <= 0 {
            return Err(Error::InvalidWindowSpec("window length must be positive".into()));
        }
        for (i, s) in sessions.iter().enumerate() {
            if s.open >= s.close {
                return Err(Error::InvalidWindowSpec(format!("session {i} opens at or after its close")));
            }
            if (s.close_ms() - s.open_ms()) % window_ms != 0 {
                return Err(Error::InvalidWindowSpec(format!(
                    "session {i} is not a whole number of windows"
                )));
            }
            if i > 0 && sessions[i - 1].close > s.open {
                return Err(Error::InvalidWindowSpec(format!(
                    "session {i} overlaps or precedes session {}",
                    i - 1
                )));
            }
        }
        Ok(WindowSpec { sessions, window_ms, close_inclusive: false, trading_days: Vec::new() })
    }

    pub fn with_close_inclusive(mut self, inclusive: bool) -> Self {
        self.close_inclusive = inclusive;
        self
    }

    pub fn with_trading_days(mut self, mut days: Vec<NaiveDate>) -> Self {
        days.sort();
        days.dedup();
        self.trading_days = days;
        self
    }

    pub fn sessions(&self) -> &[SessionInterval] {
        &self.sessions
    }

    pub fn window_ms(&self) -> i64 {
        self.window_ms
    }

    pub fn close_inclusive(&self) -> bool {
        self.close_inclusive
    }

    pub fn trading_days(&self) -> &[NaiveDate] {
        &self.trading_days
    }

    pub fn windows_per_day(&self) -> usize {
        self.sessions
            .iter()
            .map(|s| ((s.close_ms() - s.open_ms()) / self.window_ms) as usize)
            .sum()
    }

    /// Window index for a time of day, or `None` outside every session.
    pub fn window_index(&self, time_of_day_ms: i64) -> Option<usize> {
        let mut first = 0usize;
        for s in &self.sessions {
            let (open, close) = (s.open_ms(), s.close_ms());
            let count = ((close - open) / self.window_ms) as usize;
            if time_of_day_ms >= open && time_of_day_ms < close {
                return Some(first + ((time_of_day_ms - open) / self.window_ms) as usize);
            }
            first += count;
        }
        if self.close_inclusive {
            let mut first = 0usize;
            for s in &self.sessions {
                let count = ((s.close_ms() - s.open_ms()) / self.window_ms) as usize;
                if time_of_day_ms == s.close_ms() {
                    return Some(first + count - 1);
                }
                first += count;
            }
        }
        None
    }

    /// Start instant of window `index` on `date`.
    pub fn window_start(&self, date: NaiveDate, index: usize) -> Timestamp {
        let mut rest = index;
        for s in &self.sessions {
            let count = ((s.close_ms() - s.open_ms()) / self.window_ms) as usize;
            if rest < count {
                let midnight = Timestamp::from_date_time(date, NaiveTime::MIN).millis();
                return Timestamp(midnight + s.open_ms() + rest as i64 * self.window_ms);
            }
            rest -= count;
        }
        panic!("window index {index} out of range");
    }
}

/// One window of one trading day.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub date: NaiveDate,
    pub index: usize,
    pub start: Timestamp,
    pub end: Timestamp,
    /// Sorted by `(timestamp, txn_id)`.
    pub transactions: Vec<Transaction>,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct WindowAssignment {
    /// `windows_per_day` entries per day, ordered by `(date, index)`.
    pub windows: Vec<Window>,
    /// Transactions outside every session, in canonical order.
    pub discarded: Vec<Transaction>,
}

/// Buckets transactions into the spec's windows.
///
/// Days are those carrying at least one transaction (in or out of session)
/// plus the spec's explicit trading days. Every such day gets its full set of
/// windows, empty ones included.
pub fn assign_windows(mut transactions: Vec<Transaction>, spec: &WindowSpec) -> WindowAssignment {
    transactions.par_sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let days: BTreeSet<NaiveDate> = transactions
        .iter()
        .map(|t| t.timestamp.date())
        .chain(spec.trading_days.iter().copied())
        .collect();
    let per_day = spec.windows_per_day();

    let mut windows: Vec<Window> = Vec::with_capacity(days.len() * per_day);
    for &date in &days {
        for index in 0..per_day {
            let start = spec.window_start(date, index);
            windows.push(Window {
                date,
                index,
                start,
                end: Timestamp(start.millis() + spec.window_ms),
                transactions: Vec::new(),
            });
        }
    }

    let mut discarded = Vec::new();
    let mut day_slot = 0usize;
    let mut day_iter = days.iter().copied().peekable();
    let mut current_day = day_iter.next();
    for txn in transactions {
        let date = txn.timestamp.date();
        while current_day != Some(date) {
            current_day = day_iter.next();
            day_slot += 1;
        }
        match spec.window_index(txn.timestamp.time_of_day_ms()) {
            Some(idx) => windows[day_slot * per_day + idx].transactions.push(txn),
            None => discarded.push(txn),
        }
    }

    WindowAssignment { windows, discarded }
}
