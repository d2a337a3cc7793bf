//! Rule-based corruption baseline: synthetic pairs straight from monolingual
//! sentences, optionally steered by a confusion set.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::check_categorical;
use crate::pair::{ErroneousPair, Provenance};
use crate::postedit::{apply_char_noise, toggle_case, PostEditConfig};
use crate::rng::RngStream;
use crate::text::{detokenize, graphemes, tokenize, LangProfile, TokenSeq};

/// Token → plausible replacements, exact-match lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionSet {
    map: HashMap<String, Vec<String>>,
}

impl ConfusionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert<I, S>(&mut self, key: impl Into<String>, alternatives: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let key = key.into();
        let alts: Vec<String> = alternatives.into_iter().map(Into::into).collect();
        if alts.is_empty() {
            return Err(Error::Input(format!("confusion entry {key:?} has no alternatives")));
        }
        if alts.iter().any(|a| *a == key || a.is_empty()) {
            return Err(Error::Input(format!("confusion entry {key:?} lists itself or an empty alternative")));
        }
        self.map.insert(key, alts);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&[String]> {
        self.map.get(token).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Reads `key TAB alt1 alt2 ...` lines.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        let mut set = ConfusionSet::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                path: path.to_owned(),
                line: n + 1,
                msg,
            };
            let (key, alts) = line
                .split_once('\t')
                .ok_or_else(|| parse_err("expected key<TAB>alternatives".into()))?;
            set.insert(key, alts.split_whitespace())
                .map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    pub p_noise: f64,
    pub p_substitute: f64,
    pub p_insert: f64,
    pub p_delete: f64,
    pub p_swap: f64,
    #[serde(default)]
    pub p_recase: f64,
    /// Chance that a substitution of a keyed token uses the confusion set.
    #[serde(default = "default_p_confusion")]
    pub p_confusion: f64,
    #[serde(default)]
    pub char_noise: Option<PostEditConfig>,
}

fn default_p_confusion() -> f64 {
    0.5
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            p_noise: 0.15,
            p_substitute: 0.3,
            p_insert: 0.15,
            p_delete: 0.2,
            p_swap: 0.15,
            p_recase: 0.2,
            p_confusion: 0.5,
            char_noise: Some(PostEditConfig::new(0.03, 0.25, 0.25, 0.2, 0.2, 0.1)),
        }
    }
}

impl RuleConfig {
    pub fn disabled() -> Self {
        RuleConfig {
            p_noise: 0.0,
            p_substitute: 1.0,
            p_insert: 0.0,
            p_delete: 0.0,
            p_swap: 0.0,
            p_recase: 0.0,
            p_confusion: 0.0,
            char_noise: None,
        }
    }

    pub fn validate(&self, profile: &LangProfile) -> Result<()> {
        check_categorical(
            "rule",
            self.p_noise,
            &[self.p_substitute, self.p_insert, self.p_delete, self.p_swap, self.p_recase],
        )?;
        if !(0.0..=1.0).contains(&self.p_confusion) {
            return Err(Error::config("rule: p_confusion is outside [0, 1]"));
        }
        if !profile.bicameral && self.p_recase > 0.0 {
            return Err(Error::config("rule: p_recase must be 0 for a script without case"));
        }
        if let Some(c) = &self.char_noise {
            c.validate(profile)?;
        }
        Ok(())
    }

    fn pick(&self, u: f64) -> RuleOp {
        let ops = [
            (self.p_substitute, RuleOp::Substitute),
            (self.p_insert, RuleOp::Insert),
            (self.p_delete, RuleOp::Delete),
            (self.p_swap, RuleOp::Swap),
        ];
        let mut acc = 0.0;
        for (p, op) in ops {
            acc += p;
            if u < acc {
                return op;
            }
        }
        RuleOp::Recase
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleOp {
    Substitute,
    Insert,
    Delete,
    Swap,
    Recase,
}

/// `effective` is false when the operation left the sequence unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleOpRecord {
    pub index: usize,
    pub op: RuleOp,
    pub effective: bool,
    pub from_confusion: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCorrupted {
    pub tokens: TokenSeq,
    pub ops_applied: Vec<RuleOpRecord>,
    pub char_noise_applied: bool,
}

impl RuleCorrupted {
    pub fn changed(&self) -> bool {
        self.char_noise_applied || self.ops_applied.iter().any(|r| r.effective)
    }
}

/// Token-level rule corruption followed by optional character noise on the
/// detokenized result.
pub fn rule_corrupt(
    seq: &TokenSeq,
    cfg: &RuleConfig,
    cs: Option<&ConfusionSet>,
    profile: &LangProfile,
    rng: &mut RngStream,
) -> Result<RuleCorrupted> {
    cfg.validate(profile)?;
    let src = seq.tokens();
    let n = src.len();
    let mut out: Vec<String> = Vec::with_capacity(n + 2);
    let mut ops = Vec::new();

    let mut i = 0;
    while i < n {
        let tok = &src[i];
        if rng.unit() >= cfg.p_noise {
            out.push(tok.clone());
            i += 1;
            continue;
        }
        let op = cfg.pick(rng.unit());
        let mut record = RuleOpRecord {
            index: i,
            op,
            effective: true,
            from_confusion: false,
        };
        match op {
            RuleOp::Substitute => {
                let alts = cs.and_then(|c| c.get(tok));
                let replacement = match alts {
                    Some(alts) if rng.unit() < cfg.p_confusion => {
                        record.from_confusion = true;
                        alts[rng.below(alts.len())].clone()
                    }
                    _ => src[rng.below(n)].clone(),
                };
                record.effective = replacement != *tok;
                out.push(replacement);
            }
            RuleOp::Insert => {
                out.push(tok.clone());
                out.push(src[rng.below(n)].clone());
            }
            RuleOp::Delete => {
                if out.len() + (n - i - 1) == 0 {
                    record.effective = false;
                    out.push(tok.clone());
                }
            }
            RuleOp::Swap => {
                if i + 1 < n {
                    record.effective = src[i + 1] != *tok;
                    out.push(src[i + 1].clone());
                    out.push(tok.clone());
                    ops.push(record);
                    i += 2;
                    continue;
                }
                record.effective = false;
                out.push(tok.clone());
            }
            RuleOp::Recase => {
                let recased = recase_first(tok);
                record.effective = recased != *tok;
                out.push(recased);
            }
        }
        ops.push(record);
        i += 1;
    }

    let mut char_noise_applied = false;
    let tokens = match &cfg.char_noise {
        Some(char_cfg) if char_cfg.p_noise > 0.0 => {
            let text = detokenize(&out, profile);
            let noised = apply_char_noise(&text, char_cfg, profile, rng)?;
            char_noise_applied = noised != text;
            tokenize(&noised, profile)?
        }
        _ => TokenSeq::new(out)?,
    };
    Ok(RuleCorrupted {
        tokens,
        ops_applied: ops,
        char_noise_applied,
    })
}

fn recase_first(token: &str) -> String {
    let mut gs = graphemes(token);
    match gs.next() {
        Some(first) => {
            let mut s = toggle_case(first);
            s.extend(gs);
            s
        }
        None => String::new(),
    }
}

/// Wraps [`rule_corrupt`]: the corrupted text is the source, the untouched
/// input is the target.
pub fn make_rule_pair(
    seq: &TokenSeq,
    cfg: &RuleConfig,
    cs: Option<&ConfusionSet>,
    profile: &LangProfile,
    rng: &mut RngStream,
    record_id: usize,
) -> Result<ErroneousPair> {
    let corrupted = rule_corrupt(seq, cfg, cs, profile, rng)?;
    Ok(ErroneousPair {
        source: detokenize(corrupted.tokens.tokens(), profile),
        target: detokenize(seq.tokens(), profile),
        record_id,
        provenance: Provenance::Rule,
    })
}
