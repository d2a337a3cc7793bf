//! Coarse, language-agnostic error types for edits and datasets.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::m2::{extract_edits, Edit, ExtractOptions};
use crate::pair::ErroneousPair;
use crate::text::{tokenize, LangProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ErrorType {
    Punct,
    Orth,
    Spell,
    WordOrder,
    Missing,
    Unnecessary,
    Other,
}

impl ErrorType {
    pub const ALL: [ErrorType; 7] = [
        ErrorType::Punct,
        ErrorType::Orth,
        ErrorType::Spell,
        ErrorType::WordOrder,
        ErrorType::Missing,
        ErrorType::Unnecessary,
        ErrorType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorType::Punct => "PUNCT",
            ErrorType::Orth => "ORTH",
            ErrorType::Spell => "SPELL",
            ErrorType::WordOrder => "WORDORDER",
            ErrorType::Missing => "MISSING",
            ErrorType::Unnecessary => "UNNECESSARY",
            ErrorType::Other => "OTHER",
        }
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const SPELL_MAX_DISTANCE: f64 = 0.5;

fn is_punct_token(t: &str) -> bool {
    !t.is_empty() && t.chars().all(|c| c.is_ascii_punctuation() || is_unicode_punct(c))
}

fn is_unicode_punct(c: char) -> bool {
    // General punctuation, CJK symbols/punctuation and fullwidth forms
    matches!(c as u32,
        0x00A1 | 0x00A7 | 0x00AB | 0x00B6 | 0x00B7 | 0x00BB | 0x00BF
        | 0x2010..=0x2027 | 0x2030..=0x205E | 0x3001..=0x3003 | 0x3008..=0x3011
        | 0x3014..=0x301F | 0xFF01..=0xFF0F | 0xFF1A..=0xFF20 | 0xFF3B..=0xFF40
        | 0xFF5B..=0xFF65)
}

/// Character-level Levenshtein distance.
pub fn char_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn folded_concat(tokens: &[String]) -> String {
    tokens
        .iter()
        .flat_map(|t| t.chars())
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// First matching rule wins: insertion, deletion, punctuation, case or
/// whitespace only, near-miss spelling, reordering, anything else.
pub fn classify_edit<S: AsRef<str>>(edit: &Edit, source: &[S]) -> ErrorType {
    if edit.is_insertion() {
        return ErrorType::Missing;
    }
    if edit.is_deletion() {
        return ErrorType::Unnecessary;
    }
    let original: Vec<String> = source[edit.start..edit.end]
        .iter()
        .map(|s| s.as_ref().to_owned())
        .collect();
    let replacement = &edit.replacement;

    if original.iter().chain(replacement).all(|t| is_punct_token(t)) {
        return ErrorType::Punct;
    }
    if folded_concat(&original) == folded_concat(replacement) {
        return ErrorType::Orth;
    }
    if let ([o], [r]) = (&original[..], &replacement[..]) {
        let max_len = o.chars().count().max(r.chars().count());
        let ratio = char_distance(o, r) as f64 / max_len as f64;
        let first = |s: &str| s.chars().next().map(|c| c.to_lowercase().collect::<String>());
        if ratio <= SPELL_MAX_DISTANCE && first(o) == first(r) {
            return ErrorType::Spell;
        }
    }
    if original.len() >= 2 && original.len() == replacement.len() {
        let mut a = original.clone();
        let mut b = replacement.clone();
        a.sort();
        b.sort();
        if a == b {
            return ErrorType::WordOrder;
        }
    }
    ErrorType::Other
}

/// Error-type frequencies over a dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TypeHistogram {
    pub counts: BTreeMap<ErrorType, usize>,
    pub total: usize,
}

impl TypeHistogram {
    pub fn add(&mut self, t: ErrorType) {
        *self.counts.entry(t).or_default() += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: TypeHistogram) -> TypeHistogram {
        for (t, c) in other.counts {
            *self.counts.entry(t).or_default() += c;
        }
        self.total += other.total;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn ratio(&self, t: ErrorType) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(&t).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Types by descending ratio, ties in declaration order.
    pub fn ranked(&self) -> Vec<(ErrorType, f64)> {
        let mut out: Vec<(ErrorType, f64)> = self.counts.keys().map(|t| (*t, self.ratio(*t))).collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }

    pub fn modal(&self) -> Option<ErrorType> {
        self.ranked().first().map(|(t, _)| *t)
    }
}

/// Edits that turn the erroneous source into the gold target, with types.
/// Each edit is a maximal run of adjacent changes; no unchanged tokens are
/// merged in.
pub fn pair_edit_types(pair: &ErroneousPair, profile: &LangProfile) -> Result<Vec<(Edit, ErrorType)>> {
    let erroneous = tokenize(&pair.source, profile)?;
    let gold = tokenize(&pair.target, profile)?;
    let edits = extract_edits(erroneous.tokens(), gold.tokens(), &[], ExtractOptions { max_unchanged: 0 });
    Ok(edits
        .into_iter()
        .map(|e| {
            let t = classify_edit(&e, erroneous.tokens());
            (e, t)
        })
        .collect())
}

pub fn type_distribution(pairs: &[ErroneousPair], profile: &LangProfile) -> Result<TypeHistogram> {
    use rayon::prelude::*;

    if pairs.is_empty() {
        return Err(Error::Input("no pairs to analyse".into()));
    }
    pairs
        .par_iter()
        .map(|p| {
            let mut h = TypeHistogram::default();
            for (_, t) in pair_edit_types(p, profile)? {
                h.add(t);
            }
            Ok(h)
        })
        .try_reduce(TypeHistogram::default, |a, b| Ok(a.merge(b)))
}
