//! Corpus ingestion: keyword filtering, label attachment, deduplication and
//! corpus statistics.

mod keywords;
mod records;

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use chrono::NaiveDate;
use rayon::prelude::*;
use thiserror::Error;

pub use keywords::{match_keywords, Keyword, KeywordClass, KeywordSet};
pub use records::{
    load_labels, parse_record_line, read_labels, read_records, write_records, LabelMap, RawTweet, TweetRecord,
};

use crate::labels::Label;
use crate::time::{day_of, Window};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("keyword set is empty")]
    EmptyKeywordSet,
    #[error("invalid keyword `{0}`")]
    InvalidKeyword(String),
    #[error("keyword file: {0}")]
    KeywordFile(String),
    #[error("label file line {line}: {message}")]
    LabelFile { line: usize, message: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub line: usize,
    pub message: String,
}

/// Accounting for one filtering pass. Blank lines are not records.
///
/// `retained + dropped_duplicate + dropped_window + dropped_nomatch +
/// malformed == input_records`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterReport {
    pub input_records: u64,
    pub retained: u64,
    pub dropped_duplicate: u64,
    pub dropped_window: u64,
    pub dropped_nomatch: u64,
    pub malformed: u64,
    /// Retained records without a label.
    pub unlabeled: u64,
    pub errors: Vec<MalformedLine>,
}

/// Totals over retained records. Per-label arrays are indexed
/// hate, counterspeech, neutral, unlabeled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub total: u64,
    pub per_label: [u64; 4],
    pub per_user: BTreeMap<String, u64>,
    pub per_day_per_label: BTreeMap<NaiveDate, [u64; 4]>,
}

fn label_slot(label: Option<Label>) -> usize {
    label.map_or(3, Label::index)
}

impl CorpusStats {
    pub fn from_records(records: &[TweetRecord]) -> Self {
        let mut s = CorpusStats::default();
        for r in records {
            let slot = label_slot(r.label);
            s.total += 1;
            s.per_label[slot] += 1;
            *s.per_user.entry(r.user_id.clone()).or_default() += 1;
            s.per_day_per_label.entry(day_of(r.timestamp)).or_default()[slot] += 1;
        }
        s
    }

    pub fn label_count(&self, label: Label) -> u64 {
        self.per_label[label.index()]
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutput {
    pub records: Vec<TweetRecord>,
    pub report: FilterReport,
    pub stats: CorpusStats,
}

type Parsed = Result<(RawTweet, Option<Label>), String>;

/// Filters a newline-delimited record stream.
///
/// Parsing runs in parallel; deduplication, window and keyword decisions are
/// applied in input order, so the retained set is deterministic. Labels come
/// from `labels` when given, otherwise from an embedded `label` field.
pub fn filter_lines(
    lines: &[String],
    kw: &KeywordSet,
    labels: Option<&LabelMap>,
    window: Option<&Window>,
) -> FilterOutput {
    let parsed: Vec<Option<Parsed>> = lines
        .par_iter()
        .map(|l| {
            if l.trim().is_empty() {
                None
            } else {
                Some(parse_record_line(l))
            }
        })
        .collect();

    let mut report = FilterReport::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut candidates: Vec<(RawTweet, Option<Label>)> = Vec::new();
    for (i, p) in parsed.into_iter().enumerate() {
        let Some(p) = p else { continue };
        report.input_records += 1;
        match p {
            Err(message) => {
                report.malformed += 1;
                report.errors.push(MalformedLine { line: i + 1, message });
            }
            Ok((raw, embedded)) => {
                if !seen.insert(raw.tweet_id.clone()) {
                    report.dropped_duplicate += 1;
                    continue;
                }
                if window.is_some_and(|w| !w.contains(raw.timestamp)) {
                    report.dropped_window += 1;
                    continue;
                }
                let label = labels.and_then(|m| m.get(&raw.tweet_id).copied()).or(embedded);
                candidates.push((raw, label));
            }
        }
    }

    let matched: Vec<Option<TweetRecord>> = candidates
        .into_par_iter()
        .map(|(raw, label)| TweetRecord::from_raw(raw, label, kw))
        .collect();
    let mut records = Vec::with_capacity(matched.len());
    for m in matched {
        match m {
            Some(r) => records.push(r),
            None => report.dropped_nomatch += 1,
        }
    }
    report.retained = records.len() as u64;
    report.unlabeled = records.iter().filter(|r| r.label.is_none()).count() as u64;
    let stats = CorpusStats::from_records(&records);
    FilterOutput { records, report, stats }
}

pub fn filter_corpus<R: BufRead>(
    reader: R,
    kw: &KeywordSet,
    labels: Option<&LabelMap>,
    window: Option<&Window>,
) -> Result<FilterOutput, IngestError> {
    let lines: Vec<String> = reader.lines().collect::<Result<_, _>>().map_err(|e| IngestError::Io {
        path: "<records>".into(),
        source: e,
    })?;
    Ok(filter_lines(&lines, kw, labels, window))
}

pub fn write_stats_csv<W: Write>(w: W, report: &FilterReport, stats: &CorpusStats) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["metric", "value"])?;
    let rows: [(&str, u64); 14] = [
        ("input_records", report.input_records),
        ("retained", report.retained),
        ("dropped_duplicate", report.dropped_duplicate),
        ("dropped_window", report.dropped_window),
        ("dropped_nomatch", report.dropped_nomatch),
        ("malformed", report.malformed),
        ("total", stats.total),
        ("hate", stats.per_label[0]),
        ("counterspeech", stats.per_label[1]),
        ("neutral", stats.per_label[2]),
        ("unlabeled", stats.per_label[3]),
        ("users", stats.per_user.len() as u64),
        ("days", stats.per_day_per_label.len() as u64),
        ("errors", report.errors.len() as u64),
    ];
    for (k, v) in rows {
        out.write_record([k, &v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_daily_csv<W: Write>(w: W, stats: &CorpusStats) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["day", "hate", "counterspeech", "neutral", "unlabeled"])?;
    for (day, c) in &stats.per_day_per_label {
        out.write_record([
            day.to_string(),
            c[0].to_string(),
            c[1].to_string(),
            c[2].to_string(),
            c[3].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_errors_csv<W: Write>(w: W, report: &FilterReport) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["line", "message"])?;
    for e in &report.errors {
        out.write_record([e.line.to_string(), e.message.clone()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str, user: &str, ts: &str, text: &str) -> String {
        serde_json::json!({"id": id, "user_id": user, "created_at": ts, "text": text}).to_string()
    }

    #[test]
    fn duplicate_and_nomatch_dropped() {
        let kw = KeywordSet::builtin();
        let lines = vec![
            line("1", "a", "2020-03-16T10:00:00Z", "covid19 is here"),
            line("1", "b", "2020-03-16T11:00:00Z", "covid19 duplicate id"),
            line("2", "c", "2020-03-16T12:00:00Z", "nothing relevant"),
        ];
        let out = filter_lines(&lines, &kw, None, None);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].user_id, "a");
        assert_eq!(out.report.dropped_duplicate, 1);
        assert_eq!(out.report.dropped_nomatch, 1);
        assert_eq!(out.report.unlabeled, 1);
    }

    #[test]
    fn empty_stream() {
        let out = filter_corpus("".as_bytes(), &KeywordSet::builtin(), None, None).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.stats.total, 0);
        assert_eq!(out.report.input_records, 0);
    }

    #[test]
    fn malformed_reported_with_line_numbers() {
        let kw = KeywordSet::builtin();
        let lines = vec![
            line("1", "a", "2020-03-16T10:00:00Z", "covid19"),
            "".to_string(),
            "{broken".to_string(),
            line("2", "a", "not-a-date", "covid19"),
        ];
        let out = filter_lines(&lines, &kw, None, None);
        assert_eq!(out.report.input_records, 3);
        assert_eq!(out.report.malformed, 2);
        let lines_hit: Vec<usize> = out.report.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines_hit, vec![3, 4]);
    }

    #[test]
    fn window_and_labels() {
        let kw = KeywordSet::builtin();
        let lines = vec![
            line("1", "a", "2019-12-01T00:00:00Z", "covid19"),
            line("2", "a", "2020-03-16T00:00:00Z", "#kungflu"),
            line("3", "b", "2020-03-17T00:00:00Z", "#washthehate"),
        ];
        let labels: LabelMap = [("2".to_string(), Label::Hate)].into_iter().collect();
        let out = filter_lines(&lines, &kw, Some(&labels), Some(&Window::default()));
        assert_eq!(out.report.dropped_window, 1);
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[0].label, Some(Label::Hate));
        assert_eq!(out.records[1].label, None);
        assert_eq!(out.stats.per_label, [1, 0, 0, 1]);
        assert_eq!(out.stats.per_user.len(), 2);
        assert_eq!(out.stats.per_day_per_label.len(), 2);
    }

    /// Ten records filtered by hand under the whole-token rules.
    #[test]
    fn ten_record_fixture() {
        let kw = KeywordSet::builtin();
        let texts = [
            ("1", "Coronavirus update from the city"),   // coronavirus
            ("2", "the #ChinaVirusHoax2 tag"),           // hashtag prefix only: drop
            ("3", "Stop #StopAAPIHate now"),             // counter hashtag
            ("4", "lunch was great"),                    // drop
            ("5", "wuhan virus again"),                  // phrase
            ("3", "Coronavirus duplicate id"),           // duplicate: drop
            ("6", "covid-19 cases rising"),              // hyphenated term
            ("7", "chinkyness is not a word"),           // partial word: drop
            ("8", "the slant eye remark #IAmNotAVirus"), // phrase + hashtag
            ("9", "@covid19 account"),                   // mention, not a word: drop
        ];
        let lines: Vec<String> = texts
            .iter()
            .map(|(id, t)| line(id, "u", "2020-04-01T00:00:00Z", t))
            .collect();
        let out = filter_lines(&lines, &kw, None, None);
        let kept: Vec<&str> = out.records.iter().map(|r| r.tweet_id.as_str()).collect();
        assert_eq!(kept, vec!["1", "3", "5", "6", "8"]);
        assert_eq!(out.report.dropped_duplicate, 1);
        assert_eq!(out.report.dropped_nomatch, 4);
        assert_eq!(
            out.records[4].matched_keywords,
            vec!["slant", "slant eye", "#iamnotavirus"]
        );
    }
}
