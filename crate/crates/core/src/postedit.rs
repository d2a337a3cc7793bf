//! Character-level corruption applied after infilling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::check_categorical;
use crate::rng::RngStream;
use crate::text::{graphemes, is_whitespace, LangProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostEditConfig {
    pub p_noise: f64,
    pub p_substitute: f64,
    pub p_insert: f64,
    pub p_delete: f64,
    pub p_swap: f64,
    #[serde(default)]
    pub p_recase: f64,
}

impl PostEditConfig {
    pub const fn new(p_noise: f64, p_substitute: f64, p_insert: f64, p_delete: f64, p_swap: f64, p_recase: f64) -> Self {
        PostEditConfig {
            p_noise,
            p_substitute,
            p_insert,
            p_delete,
            p_swap,
            p_recase,
        }
    }

    pub const fn chinese() -> Self {
        Self::new(0.05, 0.3, 0.2, 0.3, 0.2, 0.0)
    }

    pub const fn german() -> Self {
        Self::new(0.02, 0.25, 0.25, 0.2, 0.2, 0.1)
    }

    pub const fn russian() -> Self {
        Self::german()
    }

    pub const fn disabled() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self, profile: &LangProfile) -> Result<()> {
        check_categorical(
            "post edit",
            self.p_noise,
            &[self.p_substitute, self.p_insert, self.p_delete, self.p_swap, self.p_recase],
        )?;
        if !profile.bicameral && self.p_recase > 0.0 {
            return Err(Error::config("post edit: p_recase must be 0 for a script without case"));
        }
        Ok(())
    }

    fn pick(&self, u: f64) -> CharOp {
        let ops = [
            (self.p_substitute, CharOp::Substitute),
            (self.p_insert, CharOp::Insert),
            (self.p_delete, CharOp::Delete),
            (self.p_swap, CharOp::Swap),
        ];
        let mut acc = 0.0;
        for (p, op) in ops {
            acc += p;
            if u < acc {
                return op;
            }
        }
        CharOp::Recase
    }
}

impl Default for PostEditConfig {
    fn default() -> Self {
        Self::german()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharOp {
    Substitute,
    Insert,
    Delete,
    Swap,
    Recase,
}

impl CharOp {
    pub const ALL: [CharOp; 5] = [CharOp::Substitute, CharOp::Insert, CharOp::Delete, CharOp::Swap, CharOp::Recase];
}

/// One selected grapheme. Degenerate operations (a swap with no non-space
/// right neighbour, a spared delete) are logged with `effective == false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharOpRecord {
    pub index: usize,
    pub op: CharOp,
    pub effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharNoised {
    pub text: String,
    pub ops: Vec<CharOpRecord>,
    pub positions_considered: usize,
}

impl CharNoised {
    pub fn count(&self, op: CharOp) -> usize {
        self.ops.iter().filter(|r| r.op == op && r.effective).count()
    }
}

pub fn apply_char_noise(text: &str, cfg: &PostEditConfig, profile: &LangProfile, rng: &mut RngStream) -> Result<String> {
    apply_char_noise_traced(text, cfg, profile, rng).map(|n| n.text)
}

/// Same as [`apply_char_noise`] but also returns the operation log.
///
/// Whitespace graphemes take no draws and are never modified.
pub fn apply_char_noise_traced(
    text: &str,
    cfg: &PostEditConfig,
    profile: &LangProfile,
    rng: &mut RngStream,
) -> Result<CharNoised> {
    cfg.validate(profile)?;
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let gs: Vec<&str> = graphemes(text).collect();
    let n = gs.len();
    let ws: Vec<bool> = gs.iter().map(|g| is_whitespace(g)).collect();

    let pool: Vec<String> = profile.alphabet_graphemes().unwrap_or_else(|| {
        let mut own: Vec<String> = gs
            .iter()
            .zip(&ws)
            .filter(|(_, w)| !**w)
            .map(|(g, _)| (*g).to_owned())
            .collect();
        own.sort();
        own.dedup();
        own
    });

    // non-whitespace graphemes strictly after each position
    let mut ahead = vec![0usize; n + 1];
    for i in (0..n).rev() {
        ahead[i] = ahead[i + 1] + usize::from(!ws[i]);
    }

    let mut out: Vec<String> = Vec::with_capacity(n + 4);
    let mut kept_non_ws = 0usize;
    let mut ops = Vec::new();
    let mut considered = 0;
    let mut i = 0;
    while i < n {
        let g = gs[i];
        if ws[i] {
            out.push(g.to_owned());
            i += 1;
            continue;
        }
        considered += 1;
        if rng.unit() >= cfg.p_noise {
            out.push(g.to_owned());
            kept_non_ws += 1;
            i += 1;
            continue;
        }
        let op = cfg.pick(rng.unit());
        let mut effective = true;
        match op {
            CharOp::Substitute => {
                out.push(pool[rng.below(pool.len())].clone());
                kept_non_ws += 1;
            }
            CharOp::Insert => {
                out.push(g.to_owned());
                out.push(pool[rng.below(pool.len())].clone());
                kept_non_ws += 2;
            }
            CharOp::Delete => {
                if kept_non_ws + ahead[i + 1] == 0 {
                    effective = false;
                    out.push(g.to_owned());
                    kept_non_ws += 1;
                }
            }
            CharOp::Swap => {
                if i + 1 < n && !ws[i + 1] {
                    out.push(gs[i + 1].to_owned());
                    out.push(g.to_owned());
                    kept_non_ws += 2;
                    ops.push(CharOpRecord { index: i, op, effective });
                    i += 2;
                    continue;
                }
                effective = false;
                out.push(g.to_owned());
                kept_non_ws += 1;
            }
            CharOp::Recase => {
                out.push(toggle_case(g));
                kept_non_ws += 1;
            }
        }
        ops.push(CharOpRecord { index: i, op, effective });
        i += 1;
    }

    Ok(CharNoised {
        text: out.concat(),
        ops,
        positions_considered: considered,
    })
}

/// Upper-cases a grapheme with any lowercase letter, otherwise lower-cases it.
pub fn toggle_case(g: &str) -> String {
    if g.chars().any(char::is_lowercase) {
        g.to_uppercase()
    } else {
        g.to_lowercase()
    }
}
