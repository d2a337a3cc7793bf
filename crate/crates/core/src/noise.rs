//! Token-level corruption ahead of masked prediction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::text::{TokenSeq, MASK};

pub(crate) const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub p_noise: f64,
    pub p_mask: f64,
    pub p_insert: f64,
    pub p_delete: f64,
    pub p_swap: f64,
}

impl NoiseConfig {
    pub const fn new(p_noise: f64, p_mask: f64, p_insert: f64, p_delete: f64, p_swap: f64) -> Self {
        NoiseConfig {
            p_noise,
            p_mask,
            p_insert,
            p_delete,
            p_swap,
        }
    }

    pub const fn chinese() -> Self {
        Self::new(0.5, 0.7, 0.1, 0.1, 0.1)
    }

    pub const fn german() -> Self {
        Self::new(0.3, 0.65, 0.15, 0.15, 0.05)
    }

    pub const fn russian() -> Self {
        Self::new(0.15, 0.65, 0.15, 0.15, 0.05)
    }

    /// Selects nothing.
    pub const fn disabled() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_categorical(
            "noise",
            self.p_noise,
            &[self.p_mask, self.p_insert, self.p_delete, self.p_swap],
        )
    }

    fn pick(&self, u: f64) -> NoiseOp {
        let ops = [
            (self.p_mask, NoiseOp::Mask),
            (self.p_insert, NoiseOp::Insert),
            (self.p_delete, NoiseOp::Delete),
        ];
        let mut acc = 0.0;
        for (p, op) in ops {
            acc += p;
            if u < acc {
                return op;
            }
        }
        NoiseOp::Swap
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self::german()
    }
}

pub(crate) fn check_categorical(what: &str, p_select: f64, probs: &[f64]) -> Result<()> {
    let in_unit = |p: f64| (0.0..=1.0).contains(&p);
    if !in_unit(p_select) {
        return Err(Error::config(format!(
            "{what}: p_noise {p_select} is outside [0, 1]"
        )));
    }
    if let Some(p) = probs.iter().find(|p| !in_unit(**p)) {
        return Err(Error::config(format!(
            "{what}: operation probability {p} is outside [0, 1]"
        )));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::config(format!(
            "{what}: operation probabilities sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseOp {
    Mask,
    Insert,
    Delete,
    Swap,
}

impl NoiseOp {
    pub const ALL: [NoiseOp; 4] = [NoiseOp::Mask, NoiseOp::Insert, NoiseOp::Delete, NoiseOp::Swap];
}

/// One selected position. `effective` is false for a swap at the last
/// position and for a delete that was spared to keep the sequence non-empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpRecord {
    pub index: usize,
    pub op: NoiseOp,
    pub effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptedSeq {
    pub tokens: Vec<String>,
    /// Ascending indices of every `[MASK]` in `tokens`.
    pub mask_positions: Vec<usize>,
    pub ops_applied: Vec<OpRecord>,
    /// Positions that received a selection draw (swapped-in neighbours don't).
    pub positions_considered: usize,
}

impl CorruptedSeq {
    /// A corrupted sequence that carries no noise at all.
    pub fn untouched(seq: &TokenSeq) -> Self {
        CorruptedSeq {
            tokens: seq.tokens().to_vec(),
            mask_positions: Vec::new(),
            ops_applied: Vec::new(),
            positions_considered: seq.len(),
        }
    }

    pub fn count(&self, op: NoiseOp) -> usize {
        self.ops_applied
            .iter()
            .filter(|r| r.op == op && r.effective)
            .count()
    }
}

/// Walks the original tokens left to right. Each position takes one draw for
/// selection and, when selected, one draw for the operation.
pub fn apply_token_noise(seq: &TokenSeq, cfg: &NoiseConfig, rng: &mut RngStream) -> Result<CorruptedSeq> {
    cfg.validate()?;
    let src = seq.tokens();
    let n = src.len();
    let mut tokens: Vec<String> = Vec::with_capacity(n + n / 4);
    let mut mask_positions = Vec::new();
    let mut ops_applied = Vec::new();
    let mut considered = 0;

    let mut i = 0;
    while i < n {
        considered += 1;
        let selected = rng.unit() < cfg.p_noise;
        if !selected {
            tokens.push(src[i].clone());
            i += 1;
            continue;
        }
        let op = cfg.pick(rng.unit());
        let mut effective = true;
        match op {
            NoiseOp::Mask => {
                mask_positions.push(tokens.len());
                tokens.push(MASK.to_owned());
            }
            NoiseOp::Insert => {
                tokens.push(src[i].clone());
                mask_positions.push(tokens.len());
                tokens.push(MASK.to_owned());
            }
            NoiseOp::Delete => {
                let survivors = tokens.len() + (n - i - 1);
                if survivors == 0 {
                    effective = false;
                    tokens.push(src[i].clone());
                }
            }
            NoiseOp::Swap => {
                if i + 1 < n {
                    tokens.push(src[i + 1].clone());
                    tokens.push(src[i].clone());
                    ops_applied.push(OpRecord { index: i, op, effective });
                    i += 2;
                    continue;
                }
                effective = false;
                tokens.push(src[i].clone());
            }
        }
        ops_applied.push(OpRecord { index: i, op, effective });
        i += 1;
    }

    Ok(CorruptedSeq {
        tokens,
        mask_positions,
        ops_applied,
        positions_considered: considered,
    })
}

/// Probability that a considered position yields a mask. Positions skipped
/// as the right half of a swap are not considered.
pub fn expected_mask_fraction(cfg: &NoiseConfig) -> f64 {
    cfg.p_noise * (cfg.p_mask + cfg.p_insert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(ts: &[&str]) -> TokenSeq {
        TokenSeq::from_strs(ts).unwrap()
    }

    fn run(ts: &[&str], cfg: NoiseConfig) -> CorruptedSeq {
        apply_token_noise(&seq(ts), &cfg, &mut RngStream::from_state(9)).unwrap()
    }

    #[test]
    fn zero_noise_is_identity() {
        let out = run(&["a", "b", "c"], NoiseConfig::new(0.0, 0.65, 0.15, 0.15, 0.05));
        assert_eq!(out.tokens, ["a", "b", "c"]);
        assert!(out.mask_positions.is_empty());
    }

    #[test]
    fn forced_mask() {
        let out = run(&["a", "b"], NoiseConfig::new(1.0, 1.0, 0.0, 0.0, 0.0));
        assert_eq!(out.tokens, [MASK, MASK]);
        assert_eq!(out.mask_positions, [0, 1]);
    }

    #[test]
    fn forced_swap_skips_neighbour_and_noops_at_end() {
        let out = run(&["a", "b", "c"], NoiseConfig::new(1.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!(out.tokens, ["b", "a", "c"]);
        assert_eq!(out.positions_considered, 2);
        assert_eq!(
            out.ops_applied,
            [
                OpRecord { index: 0, op: NoiseOp::Swap, effective: true },
                OpRecord { index: 2, op: NoiseOp::Swap, effective: false },
            ]
        );
    }

    #[test]
    fn forced_insert_places_mask_after_token() {
        let out = run(&["a", "b"], NoiseConfig::new(1.0, 0.0, 1.0, 0.0, 0.0));
        assert_eq!(out.tokens, ["a", MASK, "b", MASK]);
        assert_eq!(out.mask_positions, [1, 3]);
    }

    #[test]
    fn delete_spares_last_survivor() {
        let out = run(&["a", "b", "c"], NoiseConfig::new(1.0, 0.0, 0.0, 1.0, 0.0));
        assert_eq!(out.tokens, ["c"]);
        assert_eq!(out.count(NoiseOp::Delete), 2);
        assert!(!out.ops_applied[2].effective);
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = NoiseConfig::new(0.3, 0.5, 0.1, 0.1, 0.1);
        let err = apply_token_noise(&seq(&["a"]), &cfg, &mut RngStream::from_state(0));
        assert!(matches!(err, Err(Error::Config(_))));
        assert!(NoiseConfig::new(1.5, 1.0, 0.0, 0.0, 0.0).validate().is_err());
    }

    #[test]
    fn expected_mask_fraction_for_presets() {
        assert!((expected_mask_fraction(&NoiseConfig::chinese()) - 0.40).abs() < 1e-12);
        assert!((expected_mask_fraction(&NoiseConfig::russian()) - 0.12).abs() < 1e-12);
        assert!((expected_mask_fraction(&NoiseConfig::german()) - 0.24).abs() < 1e-12);
        assert_eq!(expected_mask_fraction(&NoiseConfig::disabled()), 0.0);
    }

    #[test]
    fn german_preset_values() {
        let cfg = NoiseConfig::german();
        assert_eq!(
            (cfg.p_noise, cfg.p_mask, cfg.p_insert, cfg.p_delete, cfg.p_swap),
            (0.3, 0.65, 0.15, 0.15, 0.05)
        );
    }
}
