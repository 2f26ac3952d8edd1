use std::collections::{BTreeMap, HashMap};

use super::{sentiment_score, StatsError};
use crate::ingest::TweetRecord;
use crate::stats::mwu::mann_whitney_u;
use crate::text::{tokenize, TokenKind};
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Strictly before activation; never-activated users contribute every record.
    Pre,
    /// At or after activation.
    Post,
}

impl Phase {
    fn includes(self, ts: Timestamp, activation: Option<Timestamp>) -> bool {
        match (self, activation) {
            (Phase::Pre, None) => true,
            (Phase::Pre, Some(t)) => ts < t,
            (Phase::Post, None) => false,
            (Phase::Post, Some(t)) => ts >= t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorProfile {
    pub covid_tweet_count: usize,
    pub mean_chars: f64,
    pub mean_words: f64,
    pub mean_urls: f64,
    pub mean_mentions: f64,
    pub mean_sentiment: f64,
}

impl BehaviorProfile {
    pub const METRICS: [&'static str; 6] = [
        "covid_tweet_count",
        "mean_chars",
        "mean_words",
        "mean_urls",
        "mean_mentions",
        "mean_sentiment",
    ];

    pub fn metric(&self, idx: usize) -> f64 {
        match idx {
            0 => self.covid_tweet_count as f64,
            1 => self.mean_chars,
            2 => self.mean_words,
            3 => self.mean_urls,
            4 => self.mean_mentions,
            5 => self.mean_sentiment,
            _ => panic!("metric index {idx} out of range"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileSet {
    pub profiles: BTreeMap<String, BehaviorProfile>,
    /// Requested users with no records in the phase.
    pub omitted: usize,
}

#[derive(Default)]
struct Acc {
    n: usize,
    chars: f64,
    words: f64,
    urls: f64,
    mentions: f64,
    sentiment: f64,
}

/// Per-user profiles over the records of one activation phase.
pub fn behavior_profiles<'a, I>(
    records: &[TweetRecord],
    users: I,
    activations: &HashMap<String, Timestamp>,
    phase: Phase,
) -> ProfileSet
where
    I: IntoIterator<Item = &'a str>,
{
    let mut acc: HashMap<&str, Acc> = users.into_iter().map(|u| (u, Acc::default())).collect();
    for r in records {
        let Some(a) = acc.get_mut(r.user_id.as_str()) else {
            continue;
        };
        if !phase.includes(r.timestamp, activations.get(&r.user_id).copied()) {
            continue;
        }
        let words = tokenize(&r.text).iter().filter(|t| t.kind == TokenKind::Word).count();
        a.n += 1;
        a.chars += r.text.chars().count() as f64;
        a.words += words as f64;
        a.urls += f64::from(r.urls);
        a.mentions += f64::from(r.mentions);
        a.sentiment += sentiment_score(&r.text);
    }
    let mut set = ProfileSet::default();
    for (user, a) in acc {
        if a.n == 0 {
            set.omitted += 1;
            continue;
        }
        let n = a.n as f64;
        set.profiles.insert(
            user.to_string(),
            BehaviorProfile {
                covid_tweet_count: a.n,
                mean_chars: a.chars / n,
                mean_words: a.words / n,
                mean_urls: a.urls / n,
                mean_mentions: a.mentions / n,
                mean_sentiment: a.sentiment / n,
            },
        );
    }
    set
}

/// One row of a group comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupComparison {
    pub metric: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub u: f64,
    pub z: f64,
    pub p: f64,
    pub n_a: usize,
    pub n_b: usize,
}

pub fn compare_groups(metric: &str, a: &[f64], b: &[f64]) -> Result<GroupComparison, StatsError> {
    let test = mann_whitney_u(a, b)?;
    Ok(GroupComparison {
        metric: metric.to_string(),
        mean_a: a.iter().sum::<f64>() / a.len() as f64,
        mean_b: b.iter().sum::<f64>() / b.len() as f64,
        u: test.u,
        z: test.z,
        p: test.p,
        n_a: a.len(),
        n_b: b.len(),
    })
}

/// Compares every profile metric between two profile sets. Metrics with an
/// empty side are skipped.
pub fn compare_profiles(prefix: &str, a: &ProfileSet, b: &ProfileSet) -> Vec<GroupComparison> {
    BehaviorProfile::METRICS
        .iter()
        .enumerate()
        .filter_map(|(i, name)| {
            let xa: Vec<f64> = a.profiles.values().map(|p| p.metric(i)).collect();
            let xb: Vec<f64> = b.profiles.values().map(|p| p.metric(i)).collect();
            compare_groups(&format!("{prefix}{name}"), &xa, &xb).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::Label;

    fn rec(user: &str, ts: Timestamp, text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: format!("{user}-{ts}"),
            user_id: user.into(),
            timestamp: ts,
            text: text.into(),
            label: Some(Label::Neutral),
            matched_keywords: vec!["covid19".into()],
            hashtags: vec![],
            urls: 0,
            mentions: 0,
        }
    }

    #[test]
    fn mean_chars_over_pre_phase() {
        let records = vec![
            rec("u", 1, "aaaaaaaaaa"),
            rec("u", 2, "bbbbbbbbbbbbbbbbbbbb"),
            rec("u", 10, "c"),
        ];
        let acts: HashMap<String, Timestamp> = [("u".to_string(), 10)].into_iter().collect();
        let pre = behavior_profiles(&records, ["u"], &acts, Phase::Pre);
        assert_eq!(pre.profiles["u"].mean_chars, 15.0);
        assert_eq!(pre.profiles["u"].covid_tweet_count, 2);
        let post = behavior_profiles(&records, ["u"], &acts, Phase::Post);
        assert_eq!(post.profiles["u"].covid_tweet_count, 1);
    }

    #[test]
    fn activation_at_first_tweet_omits_pre() {
        let records = vec![rec("u", 5, "x"), rec("u", 9, "y")];
        let acts: HashMap<String, Timestamp> = [("u".to_string(), 5)].into_iter().collect();
        let pre = behavior_profiles(&records, ["u"], &acts, Phase::Pre);
        assert!(pre.profiles.is_empty());
        assert_eq!(pre.omitted, 1);
    }

    /// Five users; means worked out by hand.
    #[test]
    fn five_user_group_means() {
        let records = vec![
            rec("h1", 1, "ab"),          // 2 chars, 1 word
            rec("h1", 2, "abcd ef"),     // 7 chars, 2 words
            rec("h2", 1, "x y z"),       // 5 chars, 3 words
            rec("c1", 1, "hello there"), // 11 chars, 2 words
            rec("c2", 1, "a"),           // 1 char, 1 word
            rec("c3", 1, "abc abc abc"), // 11 chars, 3 words
        ];
        let acts = HashMap::new();
        let hate = behavior_profiles(&records, ["h1", "h2"], &acts, Phase::Pre);
        let counter = behavior_profiles(&records, ["c1", "c2", "c3"], &acts, Phase::Pre);
        let rows = compare_profiles("pre_", &hate, &counter);
        let chars = rows.iter().find(|r| r.metric == "pre_mean_chars").unwrap();
        // hate users: h1 = 4.5, h2 = 5 -> 4.75; counter: 11, 1, 11 -> 23/3
        assert!((chars.mean_a - 4.75).abs() < 1e-12);
        assert!((chars.mean_b - 23.0 / 3.0).abs() < 1e-12);
        let words = rows.iter().find(|r| r.metric == "pre_mean_words").unwrap();
        // h1 = 1.5, h2 = 3 -> 2.25; counter 2, 1, 3 -> 2
        assert!((words.mean_a - 2.25).abs() < 1e-12);
        assert!((words.mean_b - 2.0).abs() < 1e-12);
        let count = rows.iter().find(|r| r.metric == "pre_covid_tweet_count").unwrap();
        assert!((count.mean_a - 1.5).abs() < 1e-12);
        assert_eq!((count.n_a, count.n_b), (2, 3));
    }

    #[test]
    fn phases_partition_records() {
        let records: Vec<TweetRecord> = (0..10).map(|t| rec("u", t, "x")).collect();
        for act in 0..12 {
            let acts: HashMap<String, Timestamp> = [("u".to_string(), act)].into_iter().collect();
            let count = |phase| {
                behavior_profiles(&records, ["u"], &acts, phase)
                    .profiles
                    .get("u")
                    .map_or(0, |p| p.covid_tweet_count)
            };
            assert_eq!(count(Phase::Pre) + count(Phase::Post), 10);
        }
    }
}
