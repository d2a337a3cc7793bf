use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::wire::{RawPrediction, ScoredToken};
use super::{PredictionRequest, PredictorBackend};
use crate::error::{Error, Result};
use crate::text::MASK;

/// Context-free backend: every mask gets the corpus unigram distribution,
/// truncated to `top_k` and renormalized.
#[derive(Debug, Clone)]
pub struct LexiconBackend {
    /// Sorted by count descending, then token ascending.
    entries: Vec<(String, u64)>,
}

impl LexiconBackend {
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (token, count) in counts {
            let token = token.into();
            if token.is_empty() || token == MASK || count == 0 {
                continue;
            }
            *merged.entry(token).or_default() += count;
        }
        if merged.is_empty() {
            return Err(Error::config("lexicon has no usable entries"));
        }
        let mut entries: Vec<(String, u64)> = merged.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(LexiconBackend { entries })
    }

    /// Counts every token of the given sentences.
    pub fn from_tokens<'a, I>(sentences: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [String]>,
    {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for sentence in sentences {
            for t in sentence {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        Self::from_counts(counts.into_iter().map(|(t, c)| (t.to_owned(), c)))
    }

    /// Reads `token TAB count` lines.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        let mut counts = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse {
                path: path.to_owned(),
                line: n + 1,
                msg: msg.to_owned(),
            };
            let (token, count) = line.split_once('\t').ok_or_else(|| parse_err("expected token<TAB>count"))?;
            let count: u64 = count.trim().parse().map_err(|_| parse_err("count is not an integer"))?;
            counts.push((token.to_owned(), count));
        }
        Self::from_counts(counts)
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    fn distribution(&self, top_k: usize) -> Vec<ScoredToken> {
        let head = &self.entries[..top_k.min(self.entries.len())];
        let total: u64 = head.iter().map(|(_, c)| c).sum();
        head.iter()
            .map(|(t, c)| ScoredToken::new(t.clone(), (*c as f64 / total as f64).ln()))
            .collect()
    }
}

impl PredictorBackend for LexiconBackend {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        Ok(requests
            .iter()
            .map(|req| {
                let dist = self.distribution(req.top_k);
                req.mask_positions()
                    .into_iter()
                    .map(|position| RawPrediction {
                        position,
                        candidates: dist.clone(),
                    })
                    .collect()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predict::predict_masks;

    #[test]
    fn frequencies_normalize_over_top_k() {
        let lex = LexiconBackend::from_counts([("a", 3), ("b", 1)]).unwrap();
        let req = PredictionRequest::new("0", "x", vec![MASK.into(), "z".into(), MASK.into()], 2).unwrap();
        let preds = predict_masks(&req, &lex).unwrap();
        assert_eq!(preds.len(), 2);
        for p in &preds {
            assert_eq!(p.candidates[0].token, "a");
            assert!((p.candidates[0].prob - 0.75).abs() < 1e-12);
            assert_eq!(p.candidates[1].token, "b");
            assert!((p.candidates[1].prob - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_renormalizes() {
        let lex = LexiconBackend::from_counts([("a", 3), ("b", 1), ("c", 4)]).unwrap();
        let req = PredictionRequest::new("0", "x", vec![MASK.into()], 2).unwrap();
        let preds = predict_masks(&req, &lex).unwrap();
        let toks: Vec<_> = preds[0].candidates.iter().map(|c| c.token.as_str()).collect();
        assert_eq!(toks, ["c", "a"]);
        assert!((preds[0].candidates[0].prob - 4.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn sentinel_never_enters_lexicon() {
        let lex = LexiconBackend::from_counts([(MASK, 10), ("a", 1)]).unwrap();
        assert_eq!(lex.entries(), [("a".to_owned(), 1)]);
        assert!(LexiconBackend::from_counts([(MASK, 10)]).is_err());
    }

    #[test]
    fn load_reports_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("lex.tsv");
        std::fs::write(&p, "a\t3\nb\tx\n").unwrap();
        match LexiconBackend::load(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
