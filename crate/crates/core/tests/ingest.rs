use std::collections::BTreeSet;

use hatenet_core::ingest::{filter_lines, KeywordSet};
use hatenet_core::time::Window;
use proptest::prelude::*;

const TEXTS: [&str; 5] = [
    "covid19 cases rising",
    "#WashTheHate please",
    "lunch was great",
    "#kungflu again",
    "",
];
const DAYS: [&str; 4] = ["2019-12-31", "2020-03-16", "2020-11-02", "2021-04-01"];

#[derive(Debug, Clone)]
enum Line {
    Record {
        id: u8,
        user: u8,
        day: usize,
        text: usize,
        label: Option<&'static str>,
    },
    Malformed,
    Blank,
}

fn render(l: &Line) -> String {
    match l {
        Line::Record {
            id,
            user,
            day,
            text,
            label,
        } => {
            let mut v = serde_json::json!({
                "id": id.to_string(),
                "user_id": format!("u{user}"),
                "created_at": format!("{}T12:00:00Z", DAYS[*day]),
                "text": TEXTS[*text],
            });
            if let Some(l) = label {
                v["label"] = (*l).into();
            }
            v.to_string()
        }
        Line::Malformed => "{\"id\": ".into(),
        Line::Blank => "   ".into(),
    }
}

fn line() -> impl Strategy<Value = Line> {
    prop_oneof![
        8 => (0u8..30, 0u8..6, 0..DAYS.len(), 0..TEXTS.len(), prop::option::of(prop::sample::select(vec!["hate", "counterspeech", "neutral"])))
            .prop_map(|(id, user, day, text, label)| Line::Record { id, user, day, text, label }),
        1 => Just(Line::Malformed),
        1 => Just(Line::Blank),
    ]
}

proptest! {
    #[test]
    fn every_record_is_accounted_for(lines in prop::collection::vec(line(), 0..80)) {
        let raw: Vec<String> = lines.iter().map(render).collect();
        let out = filter_lines(&raw, &KeywordSet::builtin(), None, Some(&Window::default()));
        let r = &out.report;
        let non_blank = lines.iter().filter(|l| !matches!(l, Line::Blank)).count() as u64;
        prop_assert_eq!(r.input_records, non_blank);
        prop_assert_eq!(
            r.retained + r.dropped_duplicate + r.dropped_window + r.dropped_nomatch + r.malformed,
            r.input_records
        );
        prop_assert_eq!(r.retained, out.records.len() as u64);
        prop_assert_eq!(r.errors.len() as u64, r.malformed);
        prop_assert_eq!(out.stats.total, r.retained);
    }

    #[test]
    fn retained_ids_are_unique_first_occurrences(lines in prop::collection::vec(line(), 0..80)) {
        let raw: Vec<String> = lines.iter().map(render).collect();
        let out = filter_lines(&raw, &KeywordSet::builtin(), None, None);
        let ids: BTreeSet<&str> = out.records.iter().map(|r| r.tweet_id.as_str()).collect();
        prop_assert_eq!(ids.len(), out.records.len());
        for rec in &out.records {
            let first = lines.iter().find_map(|l| match l {
                Line::Record { id, user, .. } if id.to_string() == rec.tweet_id => Some(format!("u{user}")),
                _ => None,
            });
            prop_assert_eq!(first.as_deref(), Some(rec.user_id.as_str()));
        }
    }

    #[test]
    fn filtering_is_idempotent(lines in prop::collection::vec(line(), 0..80)) {
        let kw = KeywordSet::builtin();
        let window = Window::default();
        let raw: Vec<String> = lines.iter().map(render).collect();
        let once = filter_lines(&raw, &kw, None, Some(&window));
        let again_raw: Vec<String> = once.records.iter().map(|r| r.to_json_line()).collect();
        let twice = filter_lines(&again_raw, &kw, None, Some(&window));
        prop_assert_eq!(&twice.records, &once.records);
        prop_assert_eq!(twice.report.retained, twice.report.input_records);
    }

    #[test]
    fn label_map_overrides_embedded_labels(lines in prop::collection::vec(line(), 1..40)) {
        let raw: Vec<String> = lines.iter().map(render).collect();
        let kw = KeywordSet::builtin();
        let base = filter_lines(&raw, &kw, None, None);
        let map = base
            .records
            .iter()
            .map(|r| (r.tweet_id.clone(), hatenet_core::Label::Neutral))
            .collect();
        let relabeled = filter_lines(&raw, &kw, Some(&map), None);
        prop_assert_eq!(relabeled.records.len(), base.records.len());
        prop_assert!(relabeled.records.iter().all(|r| r.label == Some(hatenet_core::Label::Neutral)));
    }
}
