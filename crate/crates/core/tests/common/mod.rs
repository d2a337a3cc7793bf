#![allow(dead_code)]

use std::path::PathBuf;

use gecsynth::m2::Edit;
use gecsynth::rng::RngStream;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

const SUBJECTS: &[(&str, &str)] = &[
    ("The man", "Der Mann"),
    ("The woman", "Die Frau"),
    ("The child", "Das Kind"),
    ("My brother", "Mein Bruder"),
    ("Our teacher", "Unser Lehrer"),
    ("The doctor", "Der Arzt"),
    ("The neighbour", "Der Nachbar"),
    ("My sister", "Meine Schwester"),
];
const VERBS: &[(&str, &str)] = &[
    ("reads", "liest"),
    ("buys", "kauft"),
    ("sees", "sieht"),
    ("finds", "findet"),
    ("needs", "braucht"),
    ("sells", "verkauft"),
];
const OBJECTS: &[(&str, &str)] = &[
    ("the book", "das Buch"),
    ("the old car", "das alte Auto"),
    ("the table", "den Tisch"),
    ("a letter", "einen Brief"),
    ("the small apple", "den kleinen Apfel"),
    ("the red bag", "die rote Tasche"),
    ("the new picture", "das neue Bild"),
];
const TAILS: &[(&str, &str)] = &[
    ("", ""),
    ("today", "heute"),
    ("in the city", "in der Stadt"),
    ("at home", "zu Hause"),
    ("in the evening", "am Abend"),
];

/// Template bitext, `(english, german)`, fixed by `seed`.
pub fn synthetic_bitext(n: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = RngStream::from_state(seed);
    let mut pick = |xs: &'static [(&'static str, &'static str)]| xs[rng.below(xs.len())];
    (0..n)
        .map(|_| {
            let (s, v, o, t) = (pick(SUBJECTS), pick(VERBS), pick(OBJECTS), pick(TAILS));
            let join = |parts: [&str; 4]| {
                let mut out: Vec<&str> = parts.into_iter().filter(|p| !p.is_empty()).collect();
                out.push(".");
                out.join(" ")
            };
            (join([s.0, v.0, o.0, t.0]), join([s.1, v.1, o.1, t.1]))
        })
        .collect()
}

pub fn write_bitext(path: &std::path::Path, rows: &[(String, String)]) {
    let text: String = rows.iter().map(|(e, g)| format!("{e}\t{g}\n")).collect();
    std::fs::write(path, text).unwrap();
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Match,
    Sub,
    Del,
    Ins,
}

/// Every alignment path from `(0, 0)` to `(n, m)`; matches only on equal
/// tokens, substitutions only on unequal ones.
fn all_alignments(src: &[String], hyp: &[String], i: usize, j: usize, path: &mut Vec<Op>, out: &mut Vec<Vec<Op>>) {
    if i == src.len() && j == hyp.len() {
        out.push(path.clone());
        return;
    }
    let mut go = |op: Op, i2: usize, j2: usize, path: &mut Vec<Op>| {
        path.push(op);
        all_alignments(src, hyp, i2, j2, path, out);
        path.pop();
    };
    if i < src.len() && j < hyp.len() {
        let op = if src[i] == hyp[j] { Op::Match } else { Op::Sub };
        go(op, i + 1, j + 1, path);
    }
    if i < src.len() {
        go(Op::Del, i + 1, j, path);
    }
    if j < hyp.len() {
        go(Op::Ins, i, j + 1, path);
    }
}

fn advance(op: Op, i: usize, j: usize) -> (usize, usize) {
    match op {
        Op::Match | Op::Sub => (i + 1, j + 1),
        Op::Del => (i + 1, j),
        Op::Ins => (i, j + 1),
    }
}

struct Grouping<'a> {
    hyp: &'a [String],
    gold: &'a [Edit],
    u: usize,
    best: Option<(usize, usize)>,
}

impl Grouping<'_> {
    /// Splits the steps from `t` on into copies and edits. An edit is a run
    /// of steps that starts and ends with a non-match and holds at most `u`
    /// matches.
    fn walk(&mut self, ops: &[Op], t: usize, i: usize, j: usize, prev_insertion: bool, gold: usize, edits: usize) {
        if t == ops.len() {
            if self.best.is_none_or(|(g, e)| gold > g || (gold == g && edits < e)) {
                self.best = Some((gold, edits));
            }
            return;
        }
        if ops[t] == Op::Match {
            self.walk(ops, t + 1, i + 1, j + 1, false, gold, edits);
            return;
        }
        let (mut ci, mut cj, mut matches) = (i, j, 0);
        for e in t..ops.len() {
            if ops[e] == Op::Match {
                matches += 1;
                if matches > self.u {
                    break;
                }
            }
            (ci, cj) = advance(ops[e], ci, cj);
            if ops[e] == Op::Match {
                continue;
            }
            let insertion = ci == i;
            if insertion && prev_insertion {
                continue;
            }
            let rep = &self.hyp[j..cj];
            let hit = self.gold.iter().any(|g| g.start == i && g.end == ci && g.replacement == rep);
            self.walk(ops, e + 1, ci, cj, insertion, gold + usize::from(hit), edits + 1);
        }
    }
}

/// Enumerates every minimal-cost alignment of `src → hyp` and every way of
/// grouping its steps into edits, and returns `(tp, fp, fn)` for the best
/// decomposition (most gold matches, then fewest edits).
pub fn brute_force_counts(src: &[String], hyp: &[String], gold: &[Edit], u: usize) -> (usize, usize, usize) {
    let mut paths = Vec::new();
    all_alignments(src, hyp, 0, 0, &mut Vec::new(), &mut paths);
    let cost = |p: &Vec<Op>| p.iter().filter(|o| **o != Op::Match).count();
    let min = paths.iter().map(cost).min().expect("at least one alignment");
    let mut g = Grouping {
        hyp,
        gold,
        u,
        best: None,
    };
    for p in paths.iter().filter(|p| cost(p) == min) {
        g.walk(p, 0, 0, 0, false, 0, 0);
    }
    let (tp, edits) = g.best.expect("a decomposition always exists");
    (tp, edits - tp, gold.len() - tp)
}

pub fn f_half(tp: usize, fp: usize, fn_: usize) -> f64 {
    let p = if tp + fp == 0 { 1.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fn_ == 0 { 1.0 } else { tp as f64 / (tp + fn_) as f64 };
    if p + r == 0.0 {
        0.0
    } else {
        1.25 * p * r / (0.25 * p + r)
    }
}

const VOCAB: [&str; 5] = ["a", "b", "c", "d", "e"];

fn word(rng: &mut RngStream, vocab: usize) -> String {
    VOCAB[rng.below(vocab)].to_owned()
}

fn words(rng: &mut RngStream, max: usize, vocab: usize) -> Vec<String> {
    let n = rng.below(max + 1);
    (0..n).map(|_| word(rng, vocab)).collect()
}

/// Random sorted non-overlapping gold edits over `src`.
pub fn random_gold(rng: &mut RngStream, src: &[String], vocab: usize) -> Vec<Edit> {
    let mut gold = Vec::new();
    let mut i = 0;
    while i <= src.len() {
        if rng.unit() < 0.35 {
            let span = rng.below((src.len() - i).min(2) + 1);
            let mut rep = words(rng, 2, vocab);
            if span == 0 && rep.is_empty() {
                rep.push(word(rng, vocab));
            }
            gold.push(Edit::new(i, i + span, rep).unwrap());
            // keep a copied token between edits so no two insertions touch
            i += span + 1;
        } else {
            i += 1;
        }
    }
    gold
}

/// A small `(source, hypothesis, gold)` instance. The hypothesis applies a
/// random subset of the gold edits and is then sometimes perturbed.
pub fn random_instance(rng: &mut RngStream, max_len: usize, vocab: usize) -> (Vec<String>, Vec<String>, Vec<Edit>) {
    let src = words(rng, max_len, vocab);
    let gold = random_gold(rng, &src, vocab);
    let hyp = match rng.below(3) {
        0 => words(rng, max_len, vocab),
        _ => {
            let subset: Vec<Edit> = gold.iter().filter(|_| rng.unit() < 0.7).cloned().collect();
            let mut h = gecsynth::m2::apply_edits(&src, &subset);
            if rng.unit() < 0.5 && !h.is_empty() {
                let k = rng.below(h.len());
                h[k] = word(rng, vocab);
            }
            h.truncate(max_len);
            h
        }
    };
    (src, hyp, gold)
}
