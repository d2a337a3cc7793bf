//! Max-Match evaluation: M2 gold files, system edit extraction and
//! precision/recall/F-beta.

mod align;
mod parse;
mod score;

pub use align::{extract_edits, ExtractOptions, DEFAULT_MAX_UNCHANGED};
pub use parse::{parse_m2, parse_m2_str};
pub use score::{evaluate_corpus, f_beta, f_from_counts, sentence_counts, Counts, ScoreOptions, ScoreReport};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Replace `source[start..end]` with `replacement`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: Vec<String>,
    pub etype: Option<String>,
}

impl Edit {
    pub fn new(start: usize, end: usize, replacement: Vec<String>) -> Result<Self> {
        if start > end {
            return Err(Error::Input(format!("edit span {start}..{end} is reversed")));
        }
        if start == end && replacement.is_empty() {
            return Err(Error::Input(format!("edit at {start} changes nothing")));
        }
        Ok(Edit {
            start,
            end,
            replacement,
            etype: None,
        })
    }

    pub fn from_strs(start: usize, end: usize, replacement: &[&str]) -> Result<Self> {
        Self::new(start, end, replacement.iter().map(|s| (*s).to_owned()).collect())
    }

    pub fn with_type(mut self, etype: impl Into<String>) -> Self {
        self.etype = Some(etype.into());
        self
    }

    pub fn is_insertion(&self) -> bool {
        self.start == self.end
    }

    pub fn is_deletion(&self) -> bool {
        self.replacement.is_empty()
    }

    /// Same span and replacement; the type label is ignored.
    pub fn same_change(&self, other: &Edit) -> bool {
        self.start == other.start && self.end == other.end && self.replacement == other.replacement
    }

    fn overlaps(&self, other: &Edit) -> bool {
        let strictly_inside = |p: usize, e: &Edit| e.start < p && p < e.end;
        match (self.is_insertion(), other.is_insertion()) {
            (true, true) => false,
            (true, false) => strictly_inside(self.start, other),
            (false, true) => strictly_inside(other.start, self),
            (false, false) => self.start < other.end && other.start < self.end,
        }
    }
}

/// Applies sorted, non-overlapping edits.
pub fn apply_edits<S: AsRef<str>>(source: &[S], edits: &[Edit]) -> Vec<String> {
    let mut out = Vec::with_capacity(source.len());
    let mut cursor = 0;
    for e in edits {
        out.extend(source[cursor..e.start].iter().map(|s| s.as_ref().to_owned()));
        out.extend(e.replacement.iter().cloned());
        cursor = e.end;
    }
    out.extend(source[cursor..].iter().map(|s| s.as_ref().to_owned()));
    out
}

/// A source sentence with gold edits per annotator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Sentence {
    pub source: Vec<String>,
    pub annotations: BTreeMap<usize, Vec<Edit>>,
}

impl M2Sentence {
    /// Sorts each annotator's edits and checks bounds and overlap.
    pub fn new(source: Vec<String>, mut annotations: BTreeMap<usize, Vec<Edit>>) -> Result<Self> {
        if annotations.is_empty() {
            annotations.insert(0, Vec::new());
        }
        for (annotator, edits) in annotations.iter_mut() {
            edits.sort();
            if let Some(e) = edits.iter().find(|e| e.end > source.len()) {
                return Err(Error::Input(format!(
                    "annotator {annotator}: edit {}..{} exceeds sentence length {}",
                    e.start,
                    e.end,
                    source.len()
                )));
            }
            if edits.windows(2).any(|w| w[0].overlaps(&w[1])) {
                return Err(Error::Input(format!("annotator {annotator}: overlapping edits")));
            }
        }
        Ok(M2Sentence { source, annotations })
    }

    pub fn lowercased(&self) -> M2Sentence {
        let lower = |v: &[String]| v.iter().map(|t| t.to_lowercase()).collect::<Vec<_>>();
        M2Sentence {
            source: lower(&self.source),
            annotations: self
                .annotations
                .iter()
                .map(|(a, edits)| {
                    let edits = edits
                        .iter()
                        .map(|e| Edit {
                            replacement: lower(&e.replacement),
                            ..e.clone()
                        })
                        .collect();
                    (*a, edits)
                })
                .collect(),
        }
    }
}
