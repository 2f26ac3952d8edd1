use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use super::IngestError;
use crate::text::{tokenize, TokenKind};

/// Which collection family a keyword belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeywordClass {
    Covid,
    Hate,
    Counter,
}

impl fmt::Display for KeywordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeywordClass::Covid => "covid",
            KeywordClass::Hate => "hate",
            KeywordClass::Counter => "counterspeech",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pattern {
    /// Lowercase hashtag body without the `#`.
    Hashtag(String),
    /// Lowercase word sequence.
    Phrase(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keyword {
    /// Canonical lowercase form, `#` kept for hashtags.
    pub text: String,
    pub class: KeywordClass,
    pattern: Pattern,
}

impl Keyword {
    fn parse(raw: &str, class: KeywordClass) -> Result<Self, IngestError> {
        let collapsed = raw.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        if collapsed.is_empty() {
            return Err(IngestError::InvalidKeyword(raw.to_string()));
        }
        let tokens = tokenize(&collapsed);
        let pattern = if collapsed.starts_with('#') {
            match tokens.as_slice() {
                [t] if t.kind == TokenKind::Hashtag && t.end == collapsed.len() => Pattern::Hashtag(t.text.to_string()),
                _ => return Err(IngestError::InvalidKeyword(raw.to_string())),
            }
        } else {
            if tokens.is_empty() || tokens.iter().any(|t| t.kind != TokenKind::Word) {
                return Err(IngestError::InvalidKeyword(raw.to_string()));
            }
            Pattern::Phrase(tokens.iter().map(|t| t.text.to_string()).collect())
        };
        Ok(Self {
            text: collapsed,
            class,
            pattern,
        })
    }

    pub fn is_hashtag(&self) -> bool {
        matches!(self.pattern, Pattern::Hashtag(_))
    }
}

const BUILTIN_COVID: &[&str] = &["coronavirus", "covid 19", "covid-19", "covid19", "corona virus"];

const BUILTIN_HATE: &[&str] = &[
    "#CCPVirus",
    "#ChinaDidThis",
    "#ChinaLiedPeopleDied",
    "#ChinaVirus",
    "#ChineseVirus",
    "chinese virus",
    "#ChineseBioterrorism",
    "#FuckChina",
    "#KungFlu",
    "#MakeChinaPay",
    "#wuhanflu",
    "#wuhanvirus",
    "wuhan virus",
    "chink",
    "chinky",
    "chonky",
    "churka",
    "cina",
    "cokin",
    "communistvirus",
    "coolie",
    "dink",
    "niakoué",
    "pastel de flango",
    "slant",
    "slant eye",
    "slopehead",
    "ting tong",
    "yokel",
];

const BUILTIN_COUNTER: &[&str] = &[
    "#IAmNotAVirus",
    "#WashTheHate",
    "#RacismIsAVirus",
    "#IAmNotCovid19",
    "#BeCool2Asians",
    "#StopAAPIHate",
    "#ActToChange",
    "#HateIsAVirus",
];

/// Canonicalized keyword list in a fixed order (covid terms, hate terms,
/// counterspeech terms). Entries are unique after case folding; the first
/// occurrence wins.
#[derive(Debug, Clone)]
pub struct KeywordSet {
    entries: Vec<Keyword>,
    by_hashtag: HashMap<String, Vec<usize>>,
    by_first_word: HashMap<String, Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonKeywords {
    Flat(Vec<String>),
    Sectioned {
        #[serde(default)]
        covid: Vec<String>,
        #[serde(default)]
        hate: Vec<String>,
        #[serde(default, alias = "counter")]
        counterspeech: Vec<String>,
    },
}

impl KeywordSet {
    pub const BUILTIN_TOKEN: &'static str = "builtin";

    /// The 42-entry collection list.
    pub fn builtin() -> Self {
        Self::from_classes(BUILTIN_COVID, BUILTIN_HATE, BUILTIN_COUNTER).expect("builtin keywords are valid")
    }

    pub fn from_classes<S: AsRef<str>>(covid: &[S], hate: &[S], counter: &[S]) -> Result<Self, IngestError> {
        let mut entries: Vec<Keyword> = Vec::new();
        for (class, terms) in [
            (KeywordClass::Covid, covid),
            (KeywordClass::Hate, hate),
            (KeywordClass::Counter, counter),
        ] {
            for term in terms {
                let kw = Keyword::parse(term.as_ref(), class)?;
                if !entries.iter().any(|e| e.text == kw.text) {
                    entries.push(kw);
                }
            }
        }
        if entries.is_empty() {
            return Err(IngestError::EmptyKeywordSet);
        }
        let mut by_hashtag: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_first_word: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, kw) in entries.iter().enumerate() {
            match &kw.pattern {
                Pattern::Hashtag(h) => by_hashtag.entry(h.clone()).or_default().push(i),
                Pattern::Phrase(words) => by_first_word.entry(words[0].clone()).or_default().push(i),
            }
        }
        Ok(Self {
            entries,
            by_hashtag,
            by_first_word,
        })
    }

    /// Parses a keyword document.
    ///
    /// Accepted forms: a JSON array of terms, a JSON object with `covid`,
    /// `hate` and `counterspeech` arrays, or plain text with one term per
    /// line under optional `[covid]`, `[hate]`, `[counterspeech]` headers.
    /// Lines starting with `;` are comments. Terms outside any section are
    /// treated as covid terms.
    pub fn parse(doc: &str) -> Result<Self, IngestError> {
        let trimmed = doc.trim_start();
        let json_array =
            trimmed.starts_with('[') && matches!(trimmed[1..].trim_start().chars().next(), Some('"') | Some(']'));
        if trimmed.starts_with('{') || json_array {
            let parsed: JsonKeywords =
                serde_json::from_str(doc).map_err(|e| IngestError::KeywordFile(e.to_string()))?;
            return match parsed {
                JsonKeywords::Flat(terms) => Self::from_classes(&terms, &[], &[]),
                JsonKeywords::Sectioned {
                    covid,
                    hate,
                    counterspeech,
                } => Self::from_classes(&covid, &hate, &counterspeech),
            };
        }
        let mut sections: [Vec<&str>; 3] = Default::default();
        let mut current = 0;
        for (lineno, line) in doc.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                current = match line[1..line.len() - 1].trim().to_ascii_lowercase().as_str() {
                    "covid" => 0,
                    "hate" => 1,
                    "counter" | "counterspeech" => 2,
                    other => {
                        return Err(IngestError::KeywordFile(format!(
                            "line {}: unknown section `{other}`",
                            lineno + 1
                        )))
                    }
                };
                continue;
            }
            sections[current].push(line);
        }
        Self::from_classes(&sections[0], &sections[1], &sections[2])
    }

    /// `builtin` selects the bundled list, anything else is read as a file.
    pub fn load(source: &str) -> Result<Self, IngestError> {
        if source == Self::BUILTIN_TOKEN {
            return Ok(Self::builtin());
        }
        let doc = std::fs::read_to_string(Path::new(source)).map_err(|e| IngestError::Io {
            path: source.to_string(),
            source: e,
        })?;
        Self::parse(&doc)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Keyword] {
        &self.entries
    }

    pub fn terms(&self, class: KeywordClass) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(move |k| k.class == class)
            .map(|k| k.text.as_str())
    }

    /// Occurrence count of every entry in `text`, indexed like
    /// [`entries`](Self::entries).
    pub fn count_occurrences(&self, text: &str) -> Vec<u32> {
        let mut counts = vec![0u32; self.entries.len()];
        let tokens = tokenize(text);
        let lowered: Vec<(TokenKind, String)> = tokens.iter().map(|t| (t.kind, t.text.to_lowercase())).collect();
        for (pos, (kind, tok)) in lowered.iter().enumerate() {
            match kind {
                TokenKind::Hashtag => {
                    if let Some(ids) = self.by_hashtag.get(tok) {
                        for &i in ids {
                            counts[i] += 1;
                        }
                    }
                }
                TokenKind::Word => {
                    let Some(ids) = self.by_first_word.get(tok) else {
                        continue;
                    };
                    for &i in ids {
                        let Pattern::Phrase(words) = &self.entries[i].pattern else {
                            continue;
                        };
                        let end = pos + words.len();
                        if end > lowered.len() {
                            continue;
                        }
                        let hit = lowered[pos..end]
                            .iter()
                            .zip(words)
                            .all(|((k, t), w)| *k == TokenKind::Word && t == w);
                        if hit {
                            counts[i] += 1;
                        }
                    }
                }
                _ => {}
            }
        }
        counts
    }

    /// Matched entries in keyword-set order.
    pub fn match_text(&self, text: &str) -> Vec<&str> {
        self.count_occurrences(text)
            .into_iter()
            .zip(&self.entries)
            .filter(|(c, _)| *c > 0)
            .map(|(_, k)| k.text.as_str())
            .collect()
    }
}

/// Every entry matched in `text`, in keyword-set order.
pub fn match_keywords<'k>(text: &str, kw: &'k KeywordSet) -> Vec<&'k str> {
    kw.match_text(text)
}
