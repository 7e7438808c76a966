//! Text normalization applied before encoding.
//!
//! News: URLs, hashtags, symbols. Comments: URLs, mentions, emoji, symbols.
//! Both then collapse whitespace and trim. A single pass can expose a new
//! token (`h¥ttp://x` becomes `http://x` once `¥` is dropped), so the pass is
//! repeated until nothing changes; every change shortens the text, which
//! bounds the loop.

use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};

/// Text that went through [`clean_news`] or [`clean_comment`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CleanText(String);

impl CleanText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Wraps text that is already normalized (e.g. loaded from a cache).
    pub fn from_clean(s: impl Into<String>) -> Self {
        Self(s.into())
    }
}

impl fmt::Display for CleanText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CleanText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub fn clean_news(raw: &str) -> CleanText {
    CleanText(fixpoint(raw, |s| {
        let s = strip_urls(s);
        let s = strip_prefixed(&s, '#', |c| !c.is_whitespace());
        let s = strip_symbols(&s);
        collapse_whitespace(&s)
    }))
}

pub fn clean_comment(raw: &str) -> CleanText {
    CleanText(fixpoint(raw, |s| {
        let s = strip_urls(s);
        let s = strip_prefixed(&s, '@', is_mention_char);
        let s: String = s.chars().filter(|&c| !is_emoji(c)).collect();
        let s = strip_symbols(&s);
        collapse_whitespace(&s)
    }))
}

fn fixpoint(raw: &str, pass: impl Fn(&str) -> String) -> String {
    let mut cur = pass(raw);
    loop {
        let next = pass(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Symbol categories: math, currency, modifier and other symbols.
pub fn is_symbol(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::MathSymbol
            | GeneralCategory::CurrencySymbol
            | GeneralCategory::ModifierSymbol
            | GeneralCategory::OtherSymbol
    )
}

pub fn is_emoji(c: char) -> bool {
    matches!(
        u32::from(c),
        0x1F300..=0x1FAFF | 0x2600..=0x27BF | 0xFE0F | 0x200D | 0x1F1E6..=0x1F1FF
    )
}

fn is_mention_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Removes `http://` / `https://` up to the next whitespace.
fn strip_urls(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = find_url(rest) {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
        rest = &tail[end..];
    }
    out.push_str(rest);
    out
}

fn find_url(s: &str) -> Option<usize> {
    match (s.find("http://"), s.find("https://")) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Removes `marker` together with the non-empty run of `body` chars after it.
/// A marker without a body is kept.
fn strip_prefixed(s: &str, marker: char, body: impl Fn(char) -> bool) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == marker && chars.peek().is_some_and(|&n| body(n)) {
            while chars.peek().is_some_and(|&n| body(n)) {
                chars.next();
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn strip_symbols(s: &str) -> String {
    s.chars().filter(|&c| !is_symbol(c)).collect()
}

fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}
