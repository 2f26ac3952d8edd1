//! Timestamp parsing and observation windows.
//!
//! Instants are carried as UTC epoch seconds (`i64`).

use chrono::{DateTime, NaiveDate, NaiveDateTime, TimeZone, Utc};
use thiserror::Error;

pub type Timestamp = i64;

const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TimeError {
    #[error("unparseable timestamp `{0}`")]
    Unparseable(String),
    #[error("unparseable date `{0}`")]
    BadDate(String),
    #[error("window start {start} is not before end {end}")]
    EmptyWindow { start: NaiveDate, end: NaiveDate },
}

/// Parses ISO-8601 / RFC 3339 strings, the legacy Twitter format
/// (`Wed Oct 10 20:19:24 +0000 2018`) and epoch seconds.
/// Naive date-times are taken as UTC.
pub fn parse_timestamp(raw: &str) -> Result<Timestamp, TimeError> {
    let s = raw.trim();
    if s.is_empty() {
        return Err(TimeError::Unparseable(raw.to_string()));
    }
    if s.bytes().all(|b| b.is_ascii_digit()) || (s.starts_with('-') && s.len() > 1) {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(v);
        }
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    if let Ok(dt) = DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y") {
        return Ok(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(naive.and_utc().timestamp());
        }
    }
    if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(day_start(date));
    }
    Err(TimeError::Unparseable(raw.to_string()))
}

pub fn parse_date(raw: &str) -> Result<NaiveDate, TimeError> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d").map_err(|_| TimeError::BadDate(raw.to_string()))
}

/// RFC 3339 with a `Z` suffix, second resolution.
pub fn format_timestamp(ts: Timestamp) -> String {
    match Utc.timestamp_opt(ts, 0).single() {
        Some(dt) => dt.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        None => ts.to_string(),
    }
}

pub fn day_of(ts: Timestamp) -> NaiveDate {
    let days = ts.div_euclid(SECONDS_PER_DAY);
    NaiveDate::from_num_days_from_ce_opt(719_163 + days as i32).expect("timestamp within chrono range")
}

pub fn day_start(date: NaiveDate) -> Timestamp {
    date.and_hms_opt(0, 0, 0).expect("midnight").and_utc().timestamp()
}

/// Inclusive range of UTC days.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl Window {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self, TimeError> {
        if start >= end {
            return Err(TimeError::EmptyWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, ts: Timestamp) -> bool {
        ts >= self.start_ts() && ts < self.end_exclusive_ts()
    }

    pub fn start_ts(&self) -> Timestamp {
        day_start(self.start)
    }

    /// Last second inside the window.
    pub fn end_ts(&self) -> Timestamp {
        self.end_exclusive_ts() - 1
    }

    fn end_exclusive_ts(&self) -> Timestamp {
        day_start(self.end) + SECONDS_PER_DAY
    }

    pub fn num_days(&self) -> usize {
        (self.end - self.start).num_days() as usize + 1
    }

    pub fn day_index(&self, day: NaiveDate) -> Option<usize> {
        if day < self.start || day > self.end {
            None
        } else {
            Some((day - self.start).num_days() as usize)
        }
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.start.iter_days().take(self.num_days())
    }
}

impl Default for Window {
    /// Jan 15, 2020 through Mar 26, 2021.
    fn default() -> Self {
        Self {
            start: NaiveDate::from_ymd_opt(2020, 1, 15).unwrap(),
            end: NaiveDate::from_ymd_opt(2021, 3, 26).unwrap(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_agree() {
        let a = parse_timestamp("2020-03-16T12:00:00Z").unwrap();
        assert_eq!(parse_timestamp("2020-03-16T13:00:00+01:00").unwrap(), a);
        assert_eq!(parse_timestamp("2020-03-16 12:00:00").unwrap(), a);
        assert_eq!(parse_timestamp(&a.to_string()).unwrap(), a);
        assert_eq!(parse_timestamp("Mon Mar 16 12:00:00 +0000 2020").unwrap(), a);
        assert_eq!(format_timestamp(a), "2020-03-16T12:00:00Z");
        assert!(parse_timestamp("yesterday").is_err());
        assert!(parse_timestamp("").is_err());
    }

    #[test]
    fn day_boundaries() {
        let ts = parse_timestamp("2020-03-16T23:59:59Z").unwrap();
        assert_eq!(day_of(ts), NaiveDate::from_ymd_opt(2020, 3, 16).unwrap());
        assert_eq!(day_of(ts + 1), NaiveDate::from_ymd_opt(2020, 3, 17).unwrap());
        assert_eq!(day_of(-1), NaiveDate::from_ymd_opt(1969, 12, 31).unwrap());
    }

    #[test]
    fn default_window() {
        let w = Window::default();
        assert!(w.contains(parse_timestamp("2020-01-15T00:00:00Z").unwrap()));
        assert!(w.contains(parse_timestamp("2021-03-26T23:59:59Z").unwrap()));
        assert!(!w.contains(parse_timestamp("2021-03-27T00:00:00Z").unwrap()));
        assert!(!w.contains(parse_timestamp("2020-01-14T23:59:59Z").unwrap()));
        assert_eq!(w.num_days(), 437);
        assert_eq!(w.days().count(), 437);
        assert!(Window::new(w.end, w.start).is_err());
    }
}
