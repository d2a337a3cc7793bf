//! System edit extraction.
//!
//! Candidate edits live on the Levenshtein lattice of `source → hypothesis`:
//! every cell and step that lies on some minimal-cost alignment (match 0,
//! substitute/insert/delete 1). An edit is a run of alignment steps that
//! starts and ends with a non-match step and contains at most
//! `max_unchanged` matches. A decomposition walks the lattice taking either
//! a match step or one edit; two insertions at the same position are never
//! adjacent.
//!
//! Among all decompositions the one with the most gold matches wins, then the
//! one with the fewest edits, then the one whose edits come first.

use std::collections::{HashMap, HashSet};

use super::Edit;

pub const DEFAULT_MAX_UNCHANGED: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractOptions {
    pub max_unchanged: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            max_unchanged: DEFAULT_MAX_UNCHANGED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Score {
    gold: u32,
    edits: u32,
}

impl Score {
    const ZERO: Score = Score { gold: 0, edits: 0 };

    fn beats(self, other: Score) -> bool {
        self.gold > other.gold || (self.gold == other.gold && self.edits < other.edits)
    }

    fn plus_edit(self, gold: bool) -> Score {
        Score {
            gold: self.gold + u32::from(gold),
            edits: self.edits + 1,
        }
    }
}

/// Prefix and suffix edit distances; a step is tight when it lies on a
/// minimal-cost alignment.
struct Lattice<'a> {
    src: &'a [String],
    hyp: &'a [String],
    cols: usize,
    prefix: Vec<u32>,
    suffix: Vec<u32>,
    total: u32,
}

impl<'a> Lattice<'a> {
    fn new(src: &'a [String], hyp: &'a [String]) -> Self {
        let (n, m) = (src.len(), hyp.len());
        let cols = m + 1;
        let mut prefix = vec![0u32; (n + 1) * cols];
        let mut suffix = vec![0u32; (n + 1) * cols];
        for i in 0..=n {
            for j in 0..=m {
                prefix[i * cols + j] = if i == 0 {
                    j as u32
                } else if j == 0 {
                    i as u32
                } else {
                    let diag = prefix[(i - 1) * cols + j - 1] + u32::from(src[i - 1] != hyp[j - 1]);
                    diag.min(prefix[(i - 1) * cols + j] + 1).min(prefix[i * cols + j - 1] + 1)
                };
            }
        }
        for i in (0..=n).rev() {
            for j in (0..=m).rev() {
                suffix[i * cols + j] = if i == n {
                    (m - j) as u32
                } else if j == m {
                    (n - i) as u32
                } else {
                    let diag = suffix[(i + 1) * cols + j + 1] + u32::from(src[i] != hyp[j]);
                    diag.min(suffix[(i + 1) * cols + j] + 1).min(suffix[i * cols + j + 1] + 1)
                };
            }
        }
        let total = prefix[n * cols + m];
        Lattice {
            src,
            hyp,
            cols,
            prefix,
            suffix,
            total,
        }
    }

    fn on_path(&self, i: usize, j: usize) -> bool {
        let k = i * self.cols + j;
        self.prefix[k] + self.suffix[k] == self.total
    }

    fn tight(&self, i: usize, j: usize, i2: usize, j2: usize, cost: u32) -> bool {
        self.prefix[i * self.cols + j] + cost + self.suffix[i2 * self.cols + j2] == self.total
    }

    fn is_match(&self, i: usize, j: usize) -> bool {
        i < self.src.len() && j < self.hyp.len() && self.src[i] == self.hyp[j] && self.tight(i, j, i + 1, j + 1, 0)
    }

    /// Tight non-match steps out of `(i, j)`.
    fn edit_steps(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (n, m) = (self.src.len(), self.hyp.len());
        let sub = (i < n && j < m && self.src[i] != self.hyp[j]).then_some((i + 1, j + 1));
        let del = (i < n).then_some((i + 1, j));
        let ins = (j < m).then_some((i, j + 1));
        [sub, del, ins]
            .into_iter()
            .flatten()
            .filter(move |&(i2, j2)| self.tight(i, j, i2, j2, 1))
    }

    /// End cells of every edit that starts at `(i, j)`.
    fn edit_ends(&self, i: usize, j: usize, max_unchanged: usize, out: &mut Vec<(usize, usize)>) {
        out.clear();
        let mut seen: HashSet<(usize, usize, usize, bool)> = HashSet::new();
        let mut ends: HashSet<(usize, usize)> = HashSet::new();
        // (cell, matches used, last step was an edit)
        let mut stack: Vec<(usize, usize, usize, bool)> = Vec::new();
        for (i2, j2) in self.edit_steps(i, j) {
            stack.push((i2, j2, 0, true));
        }
        while let Some(state @ (ci, cj, k, last_edit)) = stack.pop() {
            if !seen.insert(state) {
                continue;
            }
            if last_edit && ends.insert((ci, cj)) {
                out.push((ci, cj));
            }
            for (i2, j2) in self.edit_steps(ci, cj) {
                stack.push((i2, j2, k, true));
            }
            if k < max_unchanged && self.is_match(ci, cj) {
                stack.push((ci + 1, cj + 1, k + 1, false));
            }
        }
        out.sort_unstable();
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Match,
    Edit { to_i: usize, to_j: usize },
}

/// Extracts the edit decomposition of `source → hypothesis` that best agrees
/// with `gold`. Replaying the result on `source` yields `hypothesis`.
pub fn extract_edits(source: &[String], hypothesis: &[String], gold: &[Edit], opts: ExtractOptions) -> Vec<Edit> {
    let n = source.len();
    let m = hypothesis.len();
    let lat = Lattice::new(source, hypothesis);

    let mut gold_by_span: HashMap<(usize, usize), Vec<&[String]>> = HashMap::new();
    for g in gold {
        gold_by_span.entry((g.start, g.end)).or_default().push(&g.replacement);
    }
    let is_gold = |i: usize, i2: usize, rep: &[String]| {
        gold_by_span
            .get(&(i, i2))
            .is_some_and(|reps| reps.iter().any(|r| *r == rep))
    };

    let cols = m + 1;
    let idx = |i: usize, j: usize, after_insert: bool| (i * cols + j) * 2 + usize::from(after_insert);
    let mut best: Vec<Option<Score>> = vec![None; (n + 1) * cols * 2];
    let mut step: Vec<Option<Step>> = vec![None; (n + 1) * cols * 2];
    best[idx(n, m, false)] = Some(Score::ZERO);
    best[idx(n, m, true)] = Some(Score::ZERO);

    let mut ends = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if (i == n && j == m) || !lat.on_path(i, j) {
                continue;
            }
            lat.edit_ends(i, j, opts.max_unchanged, &mut ends);
            for after_insert in [false, true] {
                let mut b: Option<Score> = None;
                let mut s = None;
                for &(i2, j2) in &ends {
                    let insertion = i2 == i;
                    if insertion && after_insert {
                        continue;
                    }
                    if let Some(rest) = best[idx(i2, j2, insertion)] {
                        let cand = rest.plus_edit(is_gold(i, i2, &hypothesis[j..j2]));
                        if b.is_none_or(|x| cand.beats(x)) {
                            b = Some(cand);
                            s = Some(Step::Edit { to_i: i2, to_j: j2 });
                        }
                    }
                }
                if lat.is_match(i, j) {
                    if let Some(rest) = best[idx(i + 1, j + 1, false)] {
                        if b.is_none_or(|x| rest.beats(x)) {
                            b = Some(rest);
                            s = Some(Step::Match);
                        }
                    }
                }
                best[idx(i, j, after_insert)] = b;
                step[idx(i, j, after_insert)] = s;
            }
        }
    }

    let mut edits = Vec::new();
    let (mut i, mut j, mut after_insert) = (0, 0, false);
    while (i, j) != (n, m) {
        match step[idx(i, j, after_insert)].expect("every lattice node reaches the end") {
            Step::Match => {
                i += 1;
                j += 1;
                after_insert = false;
            }
            Step::Edit { to_i, to_j } => {
                edits.push(Edit {
                    start: i,
                    end: to_i,
                    replacement: hypothesis[j..to_j].to_vec(),
                    etype: None,
                });
                after_insert = to_i == i;
                i = to_i;
                j = to_j;
            }
        }
    }
    edits
}
