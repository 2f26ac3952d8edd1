//! Label and category vocabularies shared by every module.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown {kind} `{value}`")]
pub struct ParseLabelError {
    kind: &'static str,
    value: String,
}

impl ParseLabelError {
    fn new(kind: &'static str, value: &str) -> Self {
        Self {
            kind,
            value: value.to_string(),
        }
    }
}

/// Tweet-level annotation.
///
/// The declaration order is also the argmax tie-break order used by the
/// classifier: Hate < Counterspeech < Neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Hate,
    Counterspeech,
    Neutral,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Hate, Label::Counterspeech, Label::Neutral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> Option<Label> {
        Self::ALL.get(idx).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Hate => "hate",
            Label::Counterspeech => "counterspeech",
            Label::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hate" => Ok(Label::Hate),
            "counterspeech" | "counter" => Ok(Label::Counterspeech),
            "neutral" => Ok(Label::Neutral),
            _ => Err(ParseLabelError::new("label", s)),
        }
    }
}

/// User-level category derived from a user's labeled tweets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UserCategory {
    Hate,
    Counterspeech,
    Dual,
    Neutral,
    /// Not part of the corpus (no COVID-related tweets).
    #[default]
    Uncategorized,
}

impl UserCategory {
    /// Categories that take part in connectivity matrices, in matrix order.
    pub const CATEGORIZED: [UserCategory; 4] = [
        UserCategory::Hate,
        UserCategory::Counterspeech,
        UserCategory::Dual,
        UserCategory::Neutral,
    ];

    /// Row/column index in a connectivity matrix, `None` for uncategorized.
    pub fn matrix_index(self) -> Option<usize> {
        match self {
            UserCategory::Hate => Some(0),
            UserCategory::Counterspeech => Some(1),
            UserCategory::Dual => Some(2),
            UserCategory::Neutral => Some(3),
            UserCategory::Uncategorized => None,
        }
    }

    pub fn is_categorized(self) -> bool {
        self != UserCategory::Uncategorized
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UserCategory::Hate => "hate",
            UserCategory::Counterspeech => "counterspeech",
            UserCategory::Dual => "dual",
            UserCategory::Neutral => "neutral",
            UserCategory::Uncategorized => "uncategorized",
        }
    }

    /// Category rule: any hate and no counterspeech is Hate, the reverse is
    /// Counterspeech, both is Dual, neither is Neutral.
    pub fn from_counts(hate: usize, counter: usize) -> UserCategory {
        match (hate > 0, counter > 0) {
            (true, false) => UserCategory::Hate,
            (false, true) => UserCategory::Counterspeech,
            (true, true) => UserCategory::Dual,
            (false, false) => UserCategory::Neutral,
        }
    }
}

impl fmt::Display for UserCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UserCategory {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hate" => Ok(UserCategory::Hate),
            "counterspeech" | "counter" => Ok(UserCategory::Counterspeech),
            "dual" => Ok(UserCategory::Dual),
            "neutral" => Ok(UserCategory::Neutral),
            "uncategorized" | "" | "none" => Ok(UserCategory::Uncategorized),
            _ => Err(ParseLabelError::new("category", s)),
        }
    }
}

/// The two activation families of a cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationKind {
    Hate,
    Counterspeech,
}

impl ActivationKind {
    pub const ALL: [ActivationKind; 2] = [ActivationKind::Hate, ActivationKind::Counterspeech];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_label(label: Label) -> Option<ActivationKind> {
        match label {
            Label::Hate => Some(ActivationKind::Hate),
            Label::Counterspeech => Some(ActivationKind::Counterspeech),
            Label::Neutral => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ActivationKind::Hate => "hate",
            ActivationKind::Counterspeech => "counterspeech",
        }
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActivationKind {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hate" => Ok(ActivationKind::Hate),
            "counterspeech" | "counter" => Ok(ActivationKind::Counterspeech),
            _ => Err(ParseLabelError::new("activation kind", s)),
        }
    }
}

/// Which edges count as a node's neighbors.
///
/// `Out` follows the accounts a user follows (the content they see), `In`
/// follows their followers, `Union` takes both without double counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Out,
    In,
    Union,
}

impl FromStr for Direction {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "union" => Ok(Direction::Union),
            _ => Err(ParseLabelError::new("direction", s)),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Out => "out",
            Direction::In => "in",
            Direction::Union => "union",
        })
    }
}
