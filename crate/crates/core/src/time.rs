//! Millisecond timestamps on the exchange's local clock.
//!
//! Timestamps carry no time zone: ISO-8601 inputs are read as naive local
//! clock readings and integer inputs as milliseconds since the naive epoch
//! `1970-01-01T00:00:00` of that same clock.

use std::fmt;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime, Timelike};

pub const MS_PER_SECOND: i64 = 1_000;
pub const MS_PER_DAY: i64 = 86_400 * MS_PER_SECOND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub fn from_millis(ms: i64) -> Self {
        Timestamp(ms)
    }

    pub fn millis(self) -> i64 {
        self.0
    }

    pub fn from_datetime(dt: NaiveDateTime) -> Self {
        Timestamp(dt.and_utc().timestamp_millis())
    }

    pub fn from_date_time(date: NaiveDate, time: NaiveTime) -> Self {
        Self::from_datetime(date.and_time(time))
    }

    pub fn to_datetime(self) -> NaiveDateTime {
        chrono::DateTime::from_timestamp_millis(self.0)
            .expect("timestamp within chrono range")
            .naive_utc()
    }

    pub fn date(self) -> NaiveDate {
        self.to_datetime().date()
    }

    /// Milliseconds elapsed since local midnight.
    pub fn time_of_day_ms(self) -> i64 {
        self.0.rem_euclid(MS_PER_DAY)
    }

    /// Parses `YYYY-MM-DDTHH:MM:SS[.fff]` (a space separator and a trailing
    /// `Z` are accepted) or a bare integer count of epoch milliseconds.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.bytes().all(|b| b.is_ascii_digit()) {
            return s.parse::<i64>().ok().map(Timestamp);
        }
        let s = s.strip_suffix('Z').unwrap_or(s);
        NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f")
            .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%.f"))
            .ok()
            .map(Self::from_datetime)
    }
}

impl fmt::Display for Timestamp {
    /// ISO-8601 with millisecond precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dt = self.to_datetime();
        write!(
            f,
            "{}T{:02}:{:02}:{:02}.{:03}",
            dt.date().format("%Y-%m-%d"),
            dt.hour(),
            dt.minute(),
            dt.second(),
            dt.nanosecond() / 1_000_000
        )
    }
}

/// Parses `HH:MM` or `HH:MM:SS`.
pub fn parse_clock(s: &str) -> Option<NaiveTime> {
    let s = s.trim();
    NaiveTime::parse_from_str(s, "%H:%M:%S")
        .or_else(|_| NaiveTime::parse_from_str(s, "%H:%M"))
        .ok()
}
