use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub min_len: usize,
    pub max_len: usize,
    pub max_masks: usize,
    /// Bounds on English tokens / target tokens.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_len: 1,
            max_len: 128,
            max_masks: 64,
            min_ratio: 0.2,
            max_ratio: 5.0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_len > self.max_len {
            return Err(Error::config("filters.min_len exceeds filters.max_len"));
        }
        if !(self.min_ratio <= self.max_ratio && self.min_ratio >= 0.0) {
            return Err(Error::config("filters ratio bounds are inconsistent"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Malformed,
    TooShort,
    TooLong,
    LengthRatio,
    TooManyMasks,
    InvalidOutput,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Malformed => "malformed",
            DropReason::TooShort => "too_short",
            DropReason::TooLong => "too_long",
            DropReason::LengthRatio => "length_ratio",
            DropReason::TooManyMasks => "too_many_masks",
            DropReason::InvalidOutput => "invalid_output",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the filters can see of a record mid-pipeline. `mask_count` is unknown
/// until the noiser has run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairInProgress {
    pub source_en_tokens: usize,
    pub target_tokens: usize,
    pub mask_count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Drop(DropReason),
}

pub fn apply_filters(pair: &PairInProgress, filters: &FilterConfig) -> Verdict {
    if pair.target_tokens < filters.min_len {
        return Verdict::Drop(DropReason::TooShort);
    }
    if pair.target_tokens > filters.max_len {
        return Verdict::Drop(DropReason::TooLong);
    }
    let ratio = pair.source_en_tokens as f64 / pair.target_tokens as f64;
    if ratio < filters.min_ratio || ratio > filters.max_ratio {
        return Verdict::Drop(DropReason::LengthRatio);
    }
    match pair.mask_count {
        Some(m) if m > filters.max_masks => Verdict::Drop(DropReason::TooManyMasks),
        _ => Verdict::Keep,
    }
}
