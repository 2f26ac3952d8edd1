//! Longitudinal counts, spike quantification, group comparisons and
//! activity distributions.

mod behavior;
pub mod mwu;

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use chrono::{Duration, NaiveDate};
use thiserror::Error;

pub use behavior::{
    behavior_profiles, compare_groups, compare_profiles, BehaviorProfile, GroupComparison, Phase, ProfileSet,
};
pub use mwu::{mann_whitney_u, MannWhitney};

use crate::ingest::TweetRecord;
use crate::labels::Label;
use crate::lexicon;
use crate::text::words_lower;
use crate::time::{day_of, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains NaN")]
    NonFinite,
    #[error("window [{from}, {to}) falls outside the series")]
    OutOfRange { from: NaiveDate, to: NaiveDate },
}

/// Welford accumulator. Identical inputs give an exact mean and zero spread.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then_some(self.mean)
    }

    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub fn std(&self) -> Option<f64> {
        match self.count {
            0 => None,
            1 => Some(0.0),
            n => Some((self.m2.max(0.0) / (n - 1) as f64).sqrt()),
        }
    }
}

/// Zero-filled per-day counts over a window, indexed hate, counterspeech,
/// neutral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailySeries {
    pub window: Window,
    pub counts: Vec<[u64; 3]>,
    /// Records skipped for lacking a label or falling outside the window.
    pub skipped: u64,
}

impl DailySeries {
    pub fn get(&self, day: NaiveDate) -> Option<[u64; 3]> {
        self.window.day_index(day).map(|i| self.counts[i])
    }

    pub fn totals(&self) -> [u64; 3] {
        self.counts.iter().fold([0; 3], |mut acc, c| {
            for k in 0..3 {
                acc[k] += c[k];
            }
            acc
        })
    }

    /// Day with the highest count for `label` (earliest on ties).
    pub fn peak_day(&self, label: Label) -> Option<NaiveDate> {
        self.peak_day_with_margin(label, 0)
    }

    /// Like [`peak_day`](Self::peak_day) but only over days with `margin`
    /// days of series before them and `margin` days from them on, so a
    /// `margin`-day [`window_change`] around the result is defined.
    pub fn peak_day_with_margin(&self, label: Label, margin: usize) -> Option<NaiveDate> {
        let n = self.counts.len();
        if n == 0 || n < 2 * margin {
            return None;
        }
        let hi = if margin == 0 { n - 1 } else { n - margin };
        let (idx, best) = (margin..=hi)
            .map(|i| (i, self.counts[i]))
            .max_by(|a, b| a.1[label.index()].cmp(&b.1[label.index()]).then(b.0.cmp(&a.0)))?;
        (best[label.index()] > 0).then(|| self.window.start + Duration::days(idx as i64))
    }
}

pub fn daily_counts(records: &[TweetRecord], window: &Window) -> DailySeries {
    let mut counts = vec![[0u64; 3]; window.num_days()];
    let mut skipped = 0;
    for r in records {
        match (r.label, window.day_index(day_of(r.timestamp))) {
            (Some(l), Some(i)) => counts[i][l.index()] += 1,
            _ => skipped += 1,
        }
    }
    DailySeries {
        window: *window,
        counts,
        skipped,
    }
}

/// Percent change of `label` counts between `[event - w, event)` and
/// `[event, event + w)`. `Ok(None)` when the before-window sum is zero.
pub fn window_change(
    series: &DailySeries,
    label: Label,
    event_day: NaiveDate,
    window_days: u32,
) -> Result<Option<f64>, StatsError> {
    let w = i64::from(window_days);
    let from = event_day - Duration::days(w);
    let to = event_day + Duration::days(w);
    let last = to - Duration::days(1);
    let (Some(lo), Some(_), Some(_)) = (
        series.window.day_index(from),
        series.window.day_index(event_day),
        series.window.day_index(last),
    ) else {
        return Err(StatsError::OutOfRange { from, to });
    };
    let w = window_days as usize;
    let sum = |range: std::ops::Range<usize>| -> u64 { series.counts[range].iter().map(|c| c[label.index()]).sum() };
    let before = sum(lo..lo + w);
    let after = sum(lo + w..lo + 2 * w);
    if before == 0 {
        return Ok(None);
    }
    Ok(Some(100.0 * (after as f64 - before as f64) / before as f64))
}

/// Mean lexicon valence of the text's words mapped from [-1, 1] to [0, 1];
/// 0.5 when no word is in the lexicon.
pub fn sentiment_score(text: &str) -> f64 {
    let (sum, hits) = words_lower(text)
        .iter()
        .filter_map(|w| lexicon::valence(w))
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if hits == 0 {
        0.5
    } else {
        (sum / hits as f64 + 1.0) / 2.0
    }
}

/// Histogram: per-user tweet count of `label` → number of users.
pub fn tail_distribution(records: &[TweetRecord], label: Label) -> BTreeMap<u64, u64> {
    let mut per_user: HashMap<&str, u64> = HashMap::new();
    for r in records.iter().filter(|r| r.label == Some(label)) {
        *per_user.entry(r.user_id.as_str()).or_default() += 1;
    }
    let mut hist = BTreeMap::new();
    for c in per_user.into_values() {
        *hist.entry(c).or_default() += 1;
    }
    hist
}

pub fn write_series_csv<W: Write>(w: W, series: &DailySeries) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["day", "hate", "counterspeech", "neutral"])?;
    for (day, c) in series.window.days().zip(&series.counts) {
        out.write_record([day.to_string(), c[0].to_string(), c[1].to_string(), c[2].to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(w: W, hist: &BTreeMap<u64, u64>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["tweets", "users"])?;
    for (k, v) in hist {
        out.write_record([k.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_comparisons_csv<W: Write>(w: W, rows: &[GroupComparison]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["metric", "mean_a", "mean_b", "U", "z", "p", "n_a", "n_b"])?;
    for r in rows {
        out.write_record([
            r.metric.clone(),
            fmt_f64(r.mean_a),
            fmt_f64(r.mean_b),
            fmt_f64(r.u),
            fmt_f64(r.z),
            fmt_f64(r.p),
            r.n_a.to_string(),
            r.n_b.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Shortest round-tripping decimal form, used for every float in CSV output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
