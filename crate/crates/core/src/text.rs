//! Tweet tokenizer shared by keyword matching and feature extraction.
//!
//! Tokens are whitespace/punctuation delimited. A word is a run of
//! alphanumerics and underscores, optionally joined by inner hyphens or
//! apostrophes (`covid-19`, `don't`). `#tag` and `@user` need a word
//! character right after the sigil. URLs start with `http://`, `https://`
//! or `www.` and run to the next whitespace.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
}

/// A token borrowing from the source text. For hashtags and mentions `text`
/// excludes the sigil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset of the token (including any sigil) in the source.
    pub start: usize,
    /// Byte offset one past the end of the token.
    pub end: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}')
}

fn starts_url(rest: &str) -> bool {
    let head: String = rest.chars().take(8).collect::<String>().to_ascii_lowercase();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        let rest = &text[start..];
        if starts_url(rest) {
            let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let end = start + len;
            tokens.push(Token {
                kind: TokenKind::Url,
                text: &text[start..end],
                start,
                end,
            });
            while iter.peek().is_some_and(|&(i, _)| i < end) {
                iter.next();
            }
            continue;
        }
        if c == '#' || c == '@' {
            let after = &rest[1..];
            if after.chars().next().is_some_and(is_word_char) {
                let len = after.find(|ch: char| !is_word_char(ch)).unwrap_or(after.len());
                let end = start + 1 + len;
                tokens.push(Token {
                    kind: if c == '#' {
                        TokenKind::Hashtag
                    } else {
                        TokenKind::Mention
                    },
                    text: &text[start + 1..end],
                    start,
                    end,
                });
                while iter.peek().is_some_and(|&(i, _)| i < end) {
                    iter.next();
                }
                continue;
            }
            iter.next();
            continue;
        }
        if is_word_char(c) {
            let mut end = start;
            let mut chars = rest.char_indices().peekable();
            while let Some((off, ch)) = chars.next() {
                if is_word_char(ch) {
                    end = start + off + ch.len_utf8();
                } else if is_joiner(ch) && chars.peek().is_some_and(|&(_, nx)| is_word_char(nx)) {
                    continue;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Word,
                text: &text[start..end],
                start,
                end,
            });
            while iter.peek().is_some_and(|&(i, _)| i < end) {
                iter.next();
            }
            continue;
        }
        iter.next();
    }
    tokens
}

/// Lowercased word tokens, in order.
pub fn words_lower(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.text.to_lowercase())
        .collect()
}

/// Lowercased hashtag bodies (without `#`), in order of appearance.
pub fn hashtags_lower(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Hashtag)
        .map(|t| t.text.to_lowercase())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(TokenKind, &str)> {
        tokenize(text).into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn mixed_tokens() {
        use TokenKind::*;
        assert_eq!(
            kinds("Hi! http://a.b @x #KungFlu covid-19, don't-"),
            vec![
                (Word, "Hi"),
                (Url, "http://a.b"),
                (Mention, "x"),
                (Hashtag, "KungFlu"),
                (Word, "covid-19"),
                (Word, "don't"),
            ]
        );
    }

    #[test]
    fn bare_sigils_and_unicode() {
        use TokenKind::*;
        assert_eq!(kinds("# @ niakoué!!"), vec![(Word, "niakoué")]);
        assert_eq!(kinds("#ChinaVirusHoax2"), vec![(Hashtag, "ChinaVirusHoax2")]);
        assert!(kinds("").is_empty());
    }

    #[test]
    fn offsets_cover_sigil() {
        let t = tokenize("a #bc");
        assert_eq!((t[1].start, t[1].end), (2, 5));
    }
}
