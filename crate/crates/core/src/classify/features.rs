//! Feature extractors.
//!
//! The linguistic extractor fills a fixed 90-slot schema listed in
//! [`LINGUISTIC_FEATURES`]. Conventions:
//!
//! - *words* are word tokens (see [`crate::text`]); URLs, mentions and
//!   hashtags are not words.
//! - character-class counts (case, digits, punctuation) skip characters
//!   inside URLs; `char_count` and `whitespace_count` cover the whole text.
//! - a *sentence* is a span of the URL-stripped text ending in a run of
//!   `.`, `!`, `?` or `…` that is followed by whitespace or the end of text
//!   (or the end of text itself), and containing at least one word.
//!   Sentence character counts exclude the terminator run and surrounding
//!   whitespace.
//! - ratios are 0 when their denominator is 0; spreads are population
//!   standard deviations; medians average the two middle values.

use super::{ClassifyError, FeatureVector, SchemaId};
use crate::ingest::KeywordSet;
use crate::lexicon;
use crate::stats::sentiment_score;
use crate::text::{tokenize, Token, TokenKind};

pub const HASHTAG_DIM: usize = 42;
pub const LINGUISTIC_DIM: usize = 90;

pub const LINGUISTIC_FEATURES: [&str; LINGUISTIC_DIM] = [
    // stylistic: characters
    "char_count",
    "word_count",
    "sentence_count",
    "uppercase_count",
    "lowercase_count",
    "letter_count",
    "digit_count",
    "whitespace_count",
    "uppercase_ratio",
    "digit_ratio",
    "whitespace_ratio",
    // stylistic: punctuation
    "exclamation_count",
    "question_count",
    "period_count",
    "comma_count",
    "colon_count",
    "semicolon_count",
    "quote_count",
    "bracket_count",
    "dash_count",
    "ellipsis_count",
    "other_punctuation_count",
    "punctuation_ratio",
    // stylistic: words
    "all_caps_word_count",
    "all_caps_word_ratio",
    "capitalized_word_count",
    "elongated_word_count",
    "repeated_punctuation_count",
    "unique_word_count",
    "type_token_ratio",
    "long_word_count",
    "short_word_count",
    // metadata
    "url_count",
    "mention_count",
    "hashtag_count",
    "emoji_count",
    "starts_with_mention",
    "ends_with_hashtag",
    "url_ratio",
    "mention_ratio",
    "hashtag_ratio",
    "emoji_ratio",
    "numeric_token_count",
    "retweet_marker",
    // psycholinguistic
    "first_person_singular_count",
    "first_person_plural_count",
    "second_person_count",
    "third_person_singular_count",
    "third_person_plural_count",
    "first_person_singular_ratio",
    "first_person_plural_ratio",
    "second_person_ratio",
    "third_person_singular_ratio",
    "third_person_plural_ratio",
    "profanity_count",
    "profanity_ratio",
    "positive_word_count",
    "negative_word_count",
    "positive_ratio",
    "negative_ratio",
    "sentiment_score",
    "negation_count",
    "intensifier_count",
    "question_word_count",
    "modal_count",
    // word-length distribution
    "mean_word_length",
    "std_word_length",
    "min_word_length",
    "max_word_length",
    "median_word_length",
    "word_length_1",
    "word_length_2",
    "word_length_3",
    "word_length_4",
    "word_length_5",
    "word_length_6",
    "word_length_7",
    "word_length_8",
    "word_length_9",
    "word_length_10_plus",
    // sentence-length distribution
    "mean_sentence_words",
    "std_sentence_words",
    "min_sentence_words",
    "max_sentence_words",
    "median_sentence_words",
    "mean_sentence_chars",
    "max_sentence_chars",
    "exclamatory_sentence_fraction",
    "interrogative_sentence_fraction",
    "capitalized_sentence_fraction",
];

/// Occurrence count of each keyword, in keyword-set order.
pub fn extract_hashtag_features(text: &str, kw: &KeywordSet) -> Result<FeatureVector, ClassifyError> {
    if kw.len() != HASHTAG_DIM {
        return Err(ClassifyError::KeywordCount(kw.len()));
    }
    let values = kw.count_occurrences(text).into_iter().map(f64::from).collect();
    Ok(FeatureVector {
        values,
        schema: SchemaId::Hashtag,
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// (mean, population std, min, max, median); all zero for empty input.
fn summary(xs: &[f64]) -> [f64; 5] {
    if xs.is_empty() {
        return [0.0; 5];
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    };
    [mean, var.sqrt(), sorted[0], sorted[m - 1], median]
}

fn is_emoji(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1FAFF | 0x2600..=0x27BF | 0x2B00..=0x2BFF)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Punct {
    Exclamation,
    Question,
    Period,
    Comma,
    Colon,
    Semicolon,
    Quote,
    Bracket,
    Dash,
    Ellipsis,
    Other,
}

fn punct_class(c: char) -> Option<Punct> {
    Some(match c {
        '!' => Punct::Exclamation,
        '?' => Punct::Question,
        '.' => Punct::Period,
        ',' => Punct::Comma,
        ':' => Punct::Colon,
        ';' => Punct::Semicolon,
        '"' | '\'' | '\u{201C}' | '\u{201D}' | '\u{2018}' | '\u{2019}' => Punct::Quote,
        '(' | ')' | '[' | ']' | '{' | '}' => Punct::Bracket,
        '-' | '\u{2013}' | '\u{2014}' => Punct::Dash,
        '\u{2026}' => Punct::Ellipsis,
        '#' | '@' => return None,
        c if c.is_ascii_punctuation() => Punct::Other,
        _ => return None,
    })
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '\u{2026}')
}

struct Sentence {
    words: usize,
    chars: usize,
    exclamatory: bool,
    interrogative: bool,
    capitalized: bool,
}

fn split_sentences(body: &str) -> Vec<Sentence> {
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    let close = |seg: &[char], term: &[char], out: &mut Vec<Sentence>| {
        let text: String = seg.iter().collect();
        let trimmed = text.trim();
        let words = tokenize(trimmed).iter().filter(|t| t.kind == TokenKind::Word).count();
        if words == 0 {
            return;
        }
        out.push(Sentence {
            words,
            chars: trimmed.chars().count(),
            exclamatory: term.contains(&'!'),
            interrogative: term.contains(&'?'),
            capitalized: trimmed
                .chars()
                .find(|c| c.is_alphabetic())
                .is_some_and(char::is_uppercase),
        });
    };
    while i < chars.len() {
        if is_terminator(chars[i]) {
            let mut j = i;
            while j < chars.len() && is_terminator(chars[j]) {
                j += 1;
            }
            if j == chars.len() || chars[j].is_whitespace() {
                close(&chars[start..i], &chars[i..j], &mut out);
                start = j;
            }
            i = j;
        } else {
            i += 1;
        }
    }
    if start < chars.len() {
        close(&chars[start..], &[], &mut out);
    }
    out
}

fn lexicon_count(words: &[String], list: &[&str]) -> f64 {
    words.iter().filter(|w| lexicon::contains(list, w)).count() as f64
}

fn has_elongation(word: &str) -> bool {
    let lower: Vec<char> = word.to_lowercase().chars().collect();
    lower.windows(3).any(|w| w[0] == w[1] && w[1] == w[2])
}

pub fn extract_linguistic_features(text: &str) -> FeatureVector {
    let tokens = tokenize(text);
    let words: Vec<&Token> = tokens.iter().filter(|t| t.kind == TokenKind::Word).collect();
    let lower: Vec<String> = words.iter().map(|t| t.text.to_lowercase()).collect();
    let count_kind = |k| tokens.iter().filter(|t| t.kind == k).count() as f64;

    // body text: URLs blanked out
    let mut body = String::with_capacity(text.len());
    let mut cursor = 0;
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Url) {
        body.push_str(&text[cursor..t.start]);
        body.push(' ');
        cursor = t.end;
    }
    body.push_str(&text[cursor..]);

    let char_count = text.chars().count() as f64;
    let whitespace = text.chars().filter(|c| c.is_whitespace()).count() as f64;
    let (mut upper, mut lower_c, mut letters, mut digits, mut emoji) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut punct = [0.0f64; 11];
    for c in body.chars() {
        if c.is_alphabetic() {
            letters += 1.0;
            if c.is_uppercase() {
                upper += 1.0;
            } else if c.is_lowercase() {
                lower_c += 1.0;
            }
        }
        if c.is_numeric() {
            digits += 1.0;
        }
        if is_emoji(c) {
            emoji += 1.0;
        }
        if let Some(p) = punct_class(c) {
            punct[p as usize] += 1.0;
        }
    }
    punct[Punct::Ellipsis as usize] += body.matches("...").count() as f64;
    let punct_total: f64 = body.chars().filter(|&c| punct_class(c).is_some()).count() as f64;

    let mut repeated_punct = 0.0;
    {
        let bc: Vec<char> = body.chars().collect();
        let mut i = 0;
        while i < bc.len() {
            if matches!(bc[i], '!' | '?') {
                let mut j = i;
                while j < bc.len() && matches!(bc[j], '!' | '?') {
                    j += 1;
                }
                if j - i >= 2 {
                    repeated_punct += 1.0;
                }
                i = j;
            } else {
                i += 1;
            }
        }
    }

    let word_count = words.len() as f64;
    let lens: Vec<f64> = words.iter().map(|t| t.text.chars().count() as f64).collect();
    let all_caps = words
        .iter()
        .filter(|t| {
            let letters: Vec<char> = t.text.chars().filter(|c| c.is_alphabetic()).collect();
            letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase())
        })
        .count() as f64;
    let capitalized = words
        .iter()
        .filter(|t| t.text.chars().next().is_some_and(char::is_uppercase))
        .count() as f64;
    let elongated = words.iter().filter(|t| has_elongation(t.text)).count() as f64;
    let unique = lower.iter().collect::<std::collections::HashSet<_>>().len() as f64;
    let long = lens.iter().filter(|&&l| l > 6.0).count() as f64;
    let short = lens.iter().filter(|&&l| l <= 3.0).count() as f64;

    let token_count = tokens.len() as f64;
    let urls = count_kind(TokenKind::Url);
    let mentions = count_kind(TokenKind::Mention);
    let hashtags = count_kind(TokenKind::Hashtag);
    let numeric = words.iter().filter(|t| t.text.chars().all(char::is_numeric)).count() as f64;
    let starts_mention = tokens.first().is_some_and(|t| t.kind == TokenKind::Mention);
    let ends_hashtag = tokens.last().is_some_and(|t| t.kind == TokenKind::Hashtag);
    let rt = lower.first().is_some_and(|w| w == "rt");

    let pronouns = [
        lexicon_count(&lower, lexicon::FIRST_PERSON_SINGULAR),
        lexicon_count(&lower, lexicon::FIRST_PERSON_PLURAL),
        lexicon_count(&lower, lexicon::SECOND_PERSON),
        lexicon_count(&lower, lexicon::THIRD_PERSON_SINGULAR),
        lexicon_count(&lower, lexicon::THIRD_PERSON_PLURAL),
    ];
    let profanity = lexicon_count(&lower, lexicon::PROFANITY);
    let valences: Vec<f64> = lower.iter().filter_map(|w| lexicon::valence(w)).collect();
    let positive = valences.iter().filter(|&&v| v > 0.0).count() as f64;
    let negative = valences.iter().filter(|&&v| v < 0.0).count() as f64;

    let mut length_hist = [0.0f64; 10];
    for &l in &lens {
        length_hist[(l as usize).clamp(1, 10) - 1] += 1.0;
    }
    let word_summary = summary(&lens);

    let sentences = split_sentences(&body);
    let sentence_count = sentences.len() as f64;
    let sw: Vec<f64> = sentences.iter().map(|s| s.words as f64).collect();
    let sc: Vec<f64> = sentences.iter().map(|s| s.chars as f64).collect();
    let sentence_summary = summary(&sw);
    let sc_summary = summary(&sc);
    let frac = |f: fn(&Sentence) -> bool| ratio(sentences.iter().filter(|s| f(s)).count() as f64, sentence_count);

    let mut v = Vec::with_capacity(LINGUISTIC_DIM);
    v.extend_from_slice(&[
        char_count,
        word_count,
        sentence_count,
        upper,
        lower_c,
        letters,
        digits,
        whitespace,
        ratio(upper, letters),
        ratio(digits, char_count),
        ratio(whitespace, char_count),
    ]);
    for p in [
        Punct::Exclamation,
        Punct::Question,
        Punct::Period,
        Punct::Comma,
        Punct::Colon,
        Punct::Semicolon,
        Punct::Quote,
        Punct::Bracket,
        Punct::Dash,
        Punct::Ellipsis,
        Punct::Other,
    ] {
        v.push(punct[p as usize]);
    }
    v.push(ratio(punct_total, char_count));
    v.extend_from_slice(&[
        all_caps,
        ratio(all_caps, word_count),
        capitalized,
        elongated,
        repeated_punct,
        unique,
        ratio(unique, word_count),
        long,
        short,
    ]);
    v.extend_from_slice(&[
        urls,
        mentions,
        hashtags,
        emoji,
        f64::from(u8::from(starts_mention)),
        f64::from(u8::from(ends_hashtag)),
        ratio(urls, token_count),
        ratio(mentions, token_count),
        ratio(hashtags, token_count),
        ratio(emoji, char_count),
        numeric,
        f64::from(u8::from(rt)),
    ]);
    v.extend_from_slice(&pronouns);
    v.extend(pronouns.iter().map(|&c| ratio(c, word_count)));
    v.extend_from_slice(&[
        profanity,
        ratio(profanity, word_count),
        positive,
        negative,
        ratio(positive, word_count),
        ratio(negative, word_count),
        sentiment_score(text),
        lexicon_count(&lower, lexicon::NEGATIONS),
        lexicon_count(&lower, lexicon::INTENSIFIERS),
        lexicon_count(&lower, lexicon::QUESTION_WORDS),
        lexicon_count(&lower, lexicon::MODALS),
    ]);
    v.extend_from_slice(&word_summary);
    v.extend_from_slice(&length_hist);
    v.extend_from_slice(&sentence_summary);
    v.extend_from_slice(&[
        sc_summary[0],
        sc_summary[3],
        frac(|s| s.exclamatory),
        frac(|s| s.interrogative),
        frac(|s| s.capitalized),
    ]);
    debug_assert_eq!(v.len(), LINGUISTIC_DIM);
    FeatureVector {
        values: v,
        schema: SchemaId::Linguistic,
    }
}

/// Hashtag features followed by linguistic features.
pub fn extract_combined_features(text: &str, kw: &KeywordSet) -> Result<FeatureVector, ClassifyError> {
    let mut values = extract_hashtag_features(text, kw)?.values;
    values.extend(extract_linguistic_features(text).values);
    Ok(FeatureVector {
        values,
        schema: SchemaId::Combined,
    })
}

pub fn extract(schema: SchemaId, text: &str, kw: &KeywordSet) -> Result<FeatureVector, ClassifyError> {
    match schema {
        SchemaId::Hashtag => extract_hashtag_features(text, kw),
        SchemaId::Linguistic => Ok(extract_linguistic_features(text)),
        SchemaId::Combined => extract_combined_features(text, kw),
    }
}

pub fn linguistic_index(name: &str) -> Option<usize> {
    LINGUISTIC_FEATURES.iter().position(|n| *n == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(fv: &FeatureVector, name: &str) -> f64 {
        fv.values[linguistic_index(name).unwrap()]
    }

    #[test]
    fn schema_names_unique() {
        let set: std::collections::HashSet<_> = LINGUISTIC_FEATURES.iter().collect();
        assert_eq!(set.len(), LINGUISTIC_DIM);
    }

    #[test]
    fn hashtag_counts() {
        let kw = KeywordSet::builtin();
        let fv = extract_hashtag_features("#KungFlu #KungFlu bad", &kw).unwrap();
        assert_eq!(fv.values.len(), 42);
        let idx = kw.entries().iter().position(|k| k.text == "#kungflu").unwrap();
        assert_eq!(fv.values[idx], 2.0);
        assert_eq!(fv.values.iter().sum::<f64>(), 2.0);
        let zero = extract_hashtag_features("", &kw).unwrap();
        assert!(zero.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn five_keyword_hand_tally() {
        let kw = KeywordSet::builtin();
        let text = "Coronavirus! coronavirus, #WuhanVirus and wuhan virus; chinese virus #StopAAPIHate covid19";
        let fv = extract_hashtag_features(text, &kw).unwrap();
        let at = |t: &str| fv.values[kw.entries().iter().position(|k| k.text == t).unwrap()];
        assert_eq!(at("coronavirus"), 2.0);
        assert_eq!(at("#wuhanvirus"), 1.0);
        assert_eq!(at("wuhan virus"), 1.0);
        assert_eq!(at("chinese virus"), 1.0);
        assert_eq!(at("#stopaapihate"), 1.0);
        assert_eq!(at("covid19"), 1.0);
        assert_eq!(fv.values.iter().sum::<f64>(), 7.0);
    }

    #[test]
    fn hashtag_schema_mismatch() {
        let kw = KeywordSet::parse("covid19").unwrap();
        assert!(matches!(
            extract_hashtag_features("x", &kw),
            Err(ClassifyError::KeywordCount(1))
        ));
    }

    #[test]
    fn empty_text() {
        let fv = extract_linguistic_features("");
        assert_eq!(fv.values.len(), LINGUISTIC_DIM);
        assert_eq!(get(&fv, "sentiment_score"), 0.5);
        let nonzero: Vec<&str> = fv
            .values
            .iter()
            .zip(LINGUISTIC_FEATURES)
            .filter(|(v, _)| **v != 0.0)
            .map(|(_, n)| n)
            .collect();
        assert_eq!(nonzero, vec!["sentiment_score"]);
    }

    #[test]
    fn direct_counts() {
        let fv = extract_linguistic_features("Hi! http://a.b @x");
        assert_eq!(get(&fv, "url_count"), 1.0);
        assert_eq!(get(&fv, "mention_count"), 1.0);
        assert_eq!(get(&fv, "exclamation_count"), 1.0);
        assert_eq!(get(&fv, "period_count"), 0.0);
        assert_eq!(get(&fv, "colon_count"), 0.0);
    }

    /// Every slot worked out by hand for
    /// `I LOVE my friends!! Why do they hate us? We stand together`.
    #[test]
    fn three_sentence_reference() {
        let text = "I LOVE my friends!! Why do they hate us? We stand together";
        let fv = extract_linguistic_features(text);
        // words: I LOVE my friends Why do they hate us We stand together
        // lengths: 1 4 2 7 3 2 4 4 2 2 5 8  (sum 44)
        let lens = [1.0, 4.0, 2.0, 7.0, 3.0, 2.0, 4.0, 4.0, 2.0, 2.0, 5.0, 8.0];
        let mean_len = 44.0 / 12.0;
        let std_len = (lens.iter().map(|l: &f64| (l - mean_len).powi(2)).sum::<f64>() / 12.0).sqrt();
        // sentence 1 "I LOVE my friends" 4 words 17 chars, `!!`
        // sentence 2 "Why do they hate us" 5 words 19 chars, `?`
        // sentence 3 "We stand together" 3 words 17 chars, none
        let sw = [4.0, 5.0, 3.0];
        let sw_std = (sw.iter().map(|x: &f64| (x - 4.0).powi(2)).sum::<f64>() / 3.0).sqrt();
        // sentiment: love 1.0, friends 0.5, hate -1.0, together 0.5 -> mean 0.25 -> 0.625
        #[rustfmt::skip]
        let expected: [f64; LINGUISTIC_DIM] = [
            58.0, 12.0, 3.0,            // chars, words, sentences
            7.0, 37.0, 44.0, 0.0, 11.0, // upper (I, LOVE, W, W), lower, letters, digits, 11 spaces
            7.0 / 44.0, 0.0, 11.0 / 58.0,
            2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, // punctuation classes
            3.0 / 58.0,
            1.0, 1.0 / 12.0, 4.0, 0.0, 1.0, // all caps, ratio, capitalized, elongated, repeated punct
            12.0, 1.0, 2.0, 6.0,          // unique, ttr, long (>6), short (<=3)
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, // metadata
            2.0, 2.0, 0.0, 0.0, 1.0,      // pronouns: I my | us We | - | - | they
            2.0 / 12.0, 2.0 / 12.0, 0.0, 0.0, 1.0 / 12.0,
            0.0, 0.0,                     // profanity
            3.0, 1.0, 3.0 / 12.0, 1.0 / 12.0, 0.625,
            0.0, 0.0, 1.0, 0.0,           // negation, intensifier, question words (why), modals
            mean_len, std_len, 1.0, 8.0, 3.5,
            1.0, 4.0, 1.0, 3.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, // length histogram 1..9, 10+
            4.0, sw_std, 3.0, 5.0, 4.0,
            53.0 / 3.0, 19.0, 1.0 / 3.0, 1.0 / 3.0, 1.0,
        ];
        for (i, (got, want)) in fv.values.iter().zip(expected).enumerate() {
            assert!(
                (got - want).abs() < 1e-12,
                "{} = {got}, expected {want}",
                LINGUISTIC_FEATURES[i]
            );
        }
    }

    #[test]
    fn sentence_rules() {
        let fv = extract_linguistic_features("Price is 3.5 today... ok? see www.x.com. fine");
        // "Price is 3.5 today" | "ok" | "see fine": the URL swallows its trailing
        // period and "3.5" does not split
        assert_eq!(get(&fv, "sentence_count"), 3.0);
        assert_eq!(get(&fv, "period_count"), 4.0);
        assert_eq!(get(&fv, "ellipsis_count"), 1.0);
        assert_eq!(get(&fv, "url_count"), 1.0);
    }

    #[test]
    fn combined_is_concatenation() {
        let kw = KeywordSet::builtin();
        let text = "#KungFlu is NOT ok!!! @who http://t.co 😡";
        let c = extract_combined_features(text, &kw).unwrap();
        assert_eq!(c.values.len(), 132);
        assert_eq!(c.values[..42], extract_hashtag_features(text, &kw).unwrap().values[..]);
        assert_eq!(c.values[42..], extract_linguistic_features(text).values[..]);
        let l = extract_linguistic_features(text);
        assert_eq!(get(&l, "emoji_count"), 1.0);
        assert_eq!(get(&l, "repeated_punctuation_count"), 1.0);
        assert_eq!(get(&l, "hashtag_count"), 1.0);
    }
}
