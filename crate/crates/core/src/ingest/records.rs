use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{IngestError, KeywordSet};
use crate::labels::Label;
use crate::text::{tokenize, TokenKind};
use crate::time::{format_timestamp, parse_timestamp, Timestamp};

/// One collected post before filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTweet {
    pub tweet_id: String,
    pub user_id: String,
    pub timestamp: Timestamp,
    pub text: String,
}

/// A post that survived keyword filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub user_id: String,
    pub timestamp: Timestamp,
    pub text: String,
    pub label: Option<Label>,
    pub matched_keywords: Vec<String>,
    pub hashtags: Vec<String>,
    pub urls: u32,
    pub mentions: u32,
}

impl TweetRecord {
    /// Attaches keyword matches and surface counts. Returns `None` when no
    /// keyword matches.
    pub fn from_raw(raw: RawTweet, label: Option<Label>, kw: &KeywordSet) -> Option<Self> {
        let matched: Vec<String> = kw.match_text(&raw.text).into_iter().map(str::to_string).collect();
        if matched.is_empty() {
            return None;
        }
        let mut hashtags = Vec::new();
        let (mut urls, mut mentions) = (0, 0);
        for t in tokenize(&raw.text) {
            match t.kind {
                TokenKind::Hashtag => hashtags.push(t.text.to_lowercase()),
                TokenKind::Url => urls += 1,
                TokenKind::Mention => mentions += 1,
                TokenKind::Word => {}
            }
        }
        Some(Self {
            tweet_id: raw.tweet_id,
            user_id: raw.user_id,
            timestamp: raw.timestamp,
            text: raw.text,
            label,
            matched_keywords: matched,
            hashtags,
            urls,
            mentions,
        })
    }

    pub fn to_json_line(&self) -> String {
        let out = RecordOut {
            id: &self.tweet_id,
            user_id: &self.user_id,
            created_at: format_timestamp(self.timestamp),
            text: &self.text,
            label: self.label,
            matched_keywords: &self.matched_keywords,
            hashtags: &self.hashtags,
            urls: self.urls,
            mentions: self.mentions,
        };
        serde_json::to_string(&out).expect("record serializes")
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    user_id: &'a str,
    created_at: String,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<Label>,
    matched_keywords: &'a [String],
    hashtags: &'a [String],
    urls: u32,
    mentions: u32,
}

#[derive(Deserialize)]
struct RecordIn {
    id: Value,
    user_id: Value,
    created_at: Value,
    text: String,
    #[serde(default)]
    label: Option<String>,
}

fn id_string(v: &Value, field: &str) -> Result<String, String> {
    let s = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format!("`{field}` must be a string or number")),
    };
    if s.is_empty() {
        return Err(format!("`{field}` is empty"));
    }
    Ok(s)
}

/// Parses one newline-delimited record. An embedded `label` field is
/// returned alongside so filtered output can be re-read.
pub fn parse_record_line(line: &str) -> Result<(RawTweet, Option<Label>), String> {
    let rec: RecordIn = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let tweet_id = id_string(&rec.id, "id")?;
    let user_id = id_string(&rec.user_id, "user_id")?;
    let timestamp = match &rec.created_at {
        Value::Number(n) => n.as_i64().ok_or_else(|| "`created_at` is not an integer".to_string())?,
        Value::String(s) => parse_timestamp(s).map_err(|e| e.to_string())?,
        _ => return Err("`created_at` must be a string or number".to_string()),
    };
    let label = match rec.label.as_deref() {
        None | Some("") => None,
        Some(l) => Some(l.parse::<Label>().map_err(|e| e.to_string())?),
    };
    Ok((
        RawTweet {
            tweet_id,
            user_id,
            timestamp,
            text: rec.text,
        },
        label,
    ))
}

/// Tweet id → label, read from `tweet_id,label` CSV (header optional).
pub type LabelMap = HashMap<String, Label>;

pub fn read_labels<R: std::io::Read>(reader: R) -> Result<LabelMap, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut map = LabelMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| IngestError::LabelFile {
            line: i + 1,
            message: e.to_string(),
        })?;
        if row.len() < 2 {
            return Err(IngestError::LabelFile {
                line: i + 1,
                message: "expected `tweet_id,label`".into(),
            });
        }
        if i == 0 && row[0].eq_ignore_ascii_case("tweet_id") {
            continue;
        }
        let label = row[1].parse::<Label>().map_err(|e| IngestError::LabelFile {
            line: i + 1,
            message: e.to_string(),
        })?;
        map.insert(row[0].to_string(), label);
    }
    Ok(map)
}

pub fn load_labels(path: &str) -> Result<LabelMap, IngestError> {
    let file = std::fs::File::open(path).map_err(|e| IngestError::Io {
        path: path.to_string(),
        source: e,
    })?;
    read_labels(file)
}

/// Reads filtered output back. Keyword matches and surface counts are taken
/// from the document when present and recomputed otherwise.
pub fn read_records<R: BufRead>(reader: R, kw: &KeywordSet) -> Result<Vec<TweetRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IngestError::Io {
            path: "<records>".into(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (raw, label) =
            parse_record_line(&line).map_err(|message| IngestError::Malformed { line: i + 1, message })?;
        let tweet_id = raw.tweet_id.clone();
        let rec = TweetRecord::from_raw(raw, label, kw).ok_or_else(|| IngestError::Malformed {
            line: i + 1,
            message: format!("record {tweet_id} matches no keyword"),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_records<W: Write>(mut w: W, records: &[TweetRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_string_and_numeric_fields() {
        let (raw, label) =
            parse_record_line(r#"{"id":123,"user_id":"u1","created_at":1584360000,"text":"covid19 now"}"#).unwrap();
        assert_eq!(raw.tweet_id, "123");
        assert_eq!(raw.timestamp, 1_584_360_000);
        assert!(label.is_none());
        let (raw, label) = parse_record_line(
            r#"{"id":"9","user_id":7,"created_at":"2020-03-16T12:00:00Z","text":"x","label":"hate"}"#,
        )
        .unwrap();
        assert_eq!(raw.user_id, "7");
        assert_eq!(label, Some(Label::Hate));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_record_line("not json").is_err());
        assert!(parse_record_line(r#"{"id":"","user_id":"u","created_at":1,"text":"x"}"#).is_err());
        assert!(parse_record_line(r#"{"id":"1","user_id":"u","created_at":"soon","text":"x"}"#).is_err());
        assert!(parse_record_line(r#"{"id":"1","user_id":"u","created_at":1}"#).is_err());
        assert!(parse_record_line(r#"{"id":"1","user_id":"u","created_at":1,"text":"x","label":"spam"}"#).is_err());
    }

    #[test]
    fn label_csv() {
        let map = read_labels("tweet_id,label\n1,hate\n2, Counterspeech\n3,neutral\n".as_bytes()).unwrap();
        assert_eq!(map.len(), 3);
        assert_eq!(map["2"], Label::Counterspeech);
        assert!(read_labels("1,maybe\n".as_bytes()).is_err());
        assert!(read_labels("1\n".as_bytes()).is_err());
    }

    #[test]
    fn output_round_trips() {
        let kw = KeywordSet::builtin();
        let raw = RawTweet {
            tweet_id: "5".into(),
            user_id: "u".into(),
            timestamp: 1_584_360_000,
            text: "Stop the #KungFlu talk http://x.y @bob".into(),
        };
        let rec = TweetRecord::from_raw(raw, Some(Label::Counterspeech), &kw).unwrap();
        assert_eq!((rec.urls, rec.mentions), (1, 1));
        assert_eq!(rec.hashtags, vec!["kungflu"]);
        let mut buf = Vec::new();
        write_records(&mut buf, std::slice::from_ref(&rec)).unwrap();
        let back = read_records(buf.as_slice(), &kw).unwrap();
        assert_eq!(back, vec![rec]);
    }
}
