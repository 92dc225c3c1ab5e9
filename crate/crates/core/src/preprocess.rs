//! Regex cleaning, paragraph splitting and tokenization.
//!
//! Cleaning rules, applied in order:
//!
//! 1. URL spans (`scheme://...` and `www....`) are deleted together with the
//!    whitespace in front of them; trailing sentence punctuation is kept.
//! 2. `@mentions` become the literal token `user`.
//! 3. Characters outside letters, digits, whitespace and `. , ! ? ' " -`
//!    are removed.
//! 4. Whitespace runs collapse to one space and the ends are trimmed.
//!
//! Rule 3 can splice a new `www.` token together ("w\u{2014}ww.x"), so the
//! rules repeat until the text stops changing. Rules 3 and 4 never grow the
//! text and rule 2 only fires on the first pass, so this terminates.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

pub const MENTION_TOKEN: &str = "user";

static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\s*(?:[A-Za-z][A-Za-z0-9+.\-]*://|\bwww\.)\S*").expect("url regex")
});
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").expect("mention regex"));
static WHITESPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+").expect("ws regex"));
static BLANK_LINE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\r?\n[ \t\r]*\n").expect("blank line regex"));

const URL_TRAILING: &[char] = &['.', ',', '!', '?', '\'', '"', ')', ']', '}', ';', ':'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanText {
    pub original: String,
    pub cleaned: String,
    pub removed_urls: usize,
    pub replaced_mentions: usize,
}

fn is_retained(c: char) -> bool {
    c.is_alphanumeric()
        || c.is_whitespace()
        || matches!(c, '.' | ',' | '!' | '?' | '\'' | '"' | '-')
}

fn strip_urls(text: &str) -> (String, usize) {
    let mut count = 0;
    let out = URL.replace_all(text, |caps: &regex::Captures<'_>| {
        count += 1;
        let span = caps.get(0).map_or("", |m| m.as_str());
        let kept = span.len() - span.trim_end_matches(URL_TRAILING).len();
        span[span.len() - kept..].to_string()
    });
    (out.into_owned(), count)
}

fn clean_pass(text: &str) -> (String, usize, usize) {
    let (no_urls, urls) = strip_urls(text);
    let mut mentions = 0;
    let generic = MENTION.replace_all(&no_urls, |_: &regex::Captures<'_>| {
        mentions += 1;
        MENTION_TOKEN
    });
    let filtered: String = generic.chars().filter(|c| is_retained(*c)).collect();
    let collapsed = WHITESPACE.replace_all(&filtered, " ");
    (collapsed.trim().to_string(), urls, mentions)
}

pub fn clean_text(text: &str) -> CleanText {
    let (mut cleaned, mut removed_urls, mut replaced_mentions) = clean_pass(text);
    loop {
        let (next, urls, mentions) = clean_pass(&cleaned);
        if next == cleaned {
            break;
        }
        cleaned = next;
        removed_urls += urls;
        replaced_mentions += mentions;
    }
    CleanText {
        original: text.to_string(),
        cleaned,
        removed_urls,
        replaced_mentions,
    }
}

/// Splits on blank lines, trimming each paragraph and dropping empty ones.
pub fn split_paragraphs(text: &str) -> Vec<String> {
    BLANK_LINE
        .split(text)
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect()
}

/// Lowercase word tokens. Apostrophes and hyphens survive only between two
/// alphanumeric characters ("isn't", "state-of-the-art").
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let joiner = matches!(c, '\'' | '-' | '\u{2019}')
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if joiner {
            current.push(if c == '\u{2019}' { '\'' } else { c });
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}
