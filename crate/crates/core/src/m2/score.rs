use std::ops::Add;

use serde::Serialize;

use super::align::{extract_edits, ExtractOptions, DEFAULT_MAX_UNCHANGED};
use super::{Edit, M2Sentence};
use crate::error::{Error, Result};

/// `(1 + β²)·P·R / (β²·P + R)`, and 0 when both are 0. Scale-free, so P and R
/// may be fractions or percentages.
pub fn f_beta(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * p + r;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / denom
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            fn_: self.fn_ + o.fn_,
        }
    }
}

impl Counts {
    /// Precision and recall with undefined ratios taken as 1.
    pub fn precision_recall(&self) -> (f64, f64) {
        let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        (ratio(self.tp, self.tp + self.fp), ratio(self.tp, self.tp + self.fn_))
    }
}

pub fn f_from_counts(c: Counts, beta: f64) -> f64 {
    let (p, r) = c.precision_recall();
    f_beta(p, r, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
    pub beta: f64,
}

impl ScoreReport {
    pub fn from_counts(c: Counts, beta: f64) -> Self {
        let (precision, recall) = c.precision_recall();
        ScoreReport {
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            precision,
            recall,
            f_beta: f_beta(precision, recall, beta),
            beta,
        }
    }

    /// `P R F` as percentages with two decimals.
    pub fn summary_line(&self) -> String {
        format!(
            "{:.2} {:.2} {:.2}",
            self.precision * 100.0,
            self.recall * 100.0,
            self.f_beta * 100.0
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreOptions {
    pub beta: f64,
    pub max_unchanged: usize,
    pub lowercase: bool,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions {
            beta: 0.5,
            max_unchanged: DEFAULT_MAX_UNCHANGED,
            lowercase: false,
        }
    }
}

/// Counts for one hypothesis against one annotator's gold edits.
pub fn sentence_counts(source: &[String], hypothesis: &[String], gold: &[Edit], max_unchanged: usize) -> Counts {
    let edits = extract_edits(source, hypothesis, gold, ExtractOptions { max_unchanged });
    let tp = edits
        .iter()
        .filter(|e| gold.iter().any(|g| g.same_change(e)))
        .count();
    Counts {
        tp,
        fp: edits.len() - tp,
        fn_: gold.len() - tp,
    }
}

/// Corpus-level scoring. For each sentence the annotator that maximizes the
/// running corpus F-beta is chosen, ties going to the lowest annotator id.
pub fn evaluate_corpus(system: &[Vec<String>], gold: &[M2Sentence], opts: &ScoreOptions) -> Result<ScoreReport> {
    if system.len() != gold.len() {
        return Err(Error::Input(format!(
            "{} hypotheses for {} gold sentences",
            system.len(),
            gold.len()
        )));
    }
    let mut total = Counts::default();
    for (hyp, sent) in system.iter().zip(gold) {
        let (hyp, sent) = if opts.lowercase {
            (hyp.iter().map(|t| t.to_lowercase()).collect(), sent.lowercased())
        } else {
            (hyp.clone(), sent.clone())
        };
        let mut chosen: Option<(f64, Counts)> = None;
        for edits in sent.annotations.values() {
            let c = sentence_counts(&sent.source, &hyp, edits, opts.max_unchanged);
            let f = f_from_counts(total + c, opts.beta);
            if chosen.is_none_or(|(best, _)| f > best) {
                chosen = Some((f, c));
            }
        }
        if let Some((_, c)) = chosen {
            total = total + c;
        }
    }
    Ok(ScoreReport::from_counts(total, opts.beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::m2::parse_m2_str;

    fn v(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    #[test]
    fn f_beta_fixed_point_and_zero() {
        assert!((f_beta(0.5, 0.5, 0.5) - 0.5).abs() < 1e-12);
        assert_eq!(f_beta(0.0, 0.0, 0.5), 0.0);
        assert_eq!(f_beta(1.0, 0.0, 0.5), 0.0);
    }

    #[test]
    fn f_beta_reported_rows() {
        let round2 = |x: f64| (x * 100.0).round() / 100.0;
        assert!((round2(f_beta(44.27, 26.76, 0.5)) - 39.15).abs() <= 0.01);
        assert!((round2(f_beta(73.86, 60.74, 0.5)) - 70.80).abs() <= 0.01);
    }

    #[test]
    fn unchanged_system_output() {
        let gold = parse_m2_str("S a b c\nA 1 2|||R|||x|||REQUIRED|||-NONE-|||0\n").unwrap();
        let r = evaluate_corpus(&[v("a b c")], &gold, &ScoreOptions::default()).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (0, 0, 1));
        assert_eq!(r.precision, 1.0);
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.f_beta, 0.0);
    }

    #[test]
    fn perfect_system() {
        let gold = parse_m2_str("S a b c\nA 1 2|||R|||x|||REQUIRED|||-NONE-|||0\nA 3 3|||M|||d|||REQUIRED|||-NONE-|||0\n").unwrap();
        let r = evaluate_corpus(&[v("a x c d")], &gold, &ScoreOptions::default()).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (2, 0, 0));
        assert_eq!((r.precision, r.recall, r.f_beta), (1.0, 1.0, 1.0));
        assert_eq!(r.summary_line(), "100.00 100.00 100.00");
    }

    #[test]
    fn length_mismatch() {
        let gold = parse_m2_str("S a\n").unwrap();
        assert!(matches!(
            evaluate_corpus(&[], &gold, &ScoreOptions::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn lowercase_folds_both_sides() {
        let gold = parse_m2_str("S The cat\nA 1 2|||R|||Dog|||REQUIRED|||-NONE-|||0\n").unwrap();
        let strict = evaluate_corpus(&[v("the dog")], &gold, &ScoreOptions::default()).unwrap();
        assert_eq!(strict.tp, 0);
        let folded = ScoreOptions {
            lowercase: true,
            ..ScoreOptions::default()
        };
        let r = evaluate_corpus(&[v("the dog")], &gold, &folded).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (1, 0, 0));
    }

    #[test]
    fn best_annotator_is_chosen() {
        let text = "S a b\nA 0 1|||R|||y|||REQUIRED|||-NONE-|||0\nA 0 1|||R|||x|||REQUIRED|||-NONE-|||1\n";
        let gold = parse_m2_str(text).unwrap();
        let r = evaluate_corpus(&[v("x b")], &gold, &ScoreOptions::default()).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_), (1, 0, 0));
    }
}
