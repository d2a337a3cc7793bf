//! Masked-infill prediction: the backend contract, candidate normalization,
//! sampling of replacements and infilling.
//!
//! A backend sees the English sentence and the corrupted target with `[MASK]`
//! placeholders and returns scored candidates for every placeholder in one
//! pass. The client side ([`predict_masks`]) checks the position set, drops
//! unusable candidates, truncates to `top_k` and renormalizes.

mod echo;
mod lexicon;
mod remote;
mod server;
pub mod conformance;
pub mod wire;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use echo::EchoBackend;
pub use lexicon::LexiconBackend;
pub use remote::RemoteBackend;
pub use server::StubServer;

use crate::error::{Error, Result};
use crate::noise::CorruptedSeq;
use crate::rng::RngStream;
use crate::text::{TokenSeq, MASK};
use wire::RawPrediction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionRequest {
    pub id: String,
    pub source_en: String,
    pub target_tokens: Vec<String>,
    pub top_k: usize,
}

impl PredictionRequest {
    pub fn new(
        id: impl Into<String>,
        source_en: impl Into<String>,
        target_tokens: Vec<String>,
        top_k: usize,
    ) -> Result<Self> {
        if top_k == 0 {
            return Err(Error::protocol("top_k must be at least 1"));
        }
        if !target_tokens.iter().any(|t| t == MASK) {
            return Err(Error::protocol("request has no [MASK] positions"));
        }
        Ok(PredictionRequest {
            id: id.into(),
            source_en: source_en.into(),
            target_tokens,
            top_k,
        })
    }

    pub fn mask_positions(&self) -> Vec<usize> {
        mask_positions(&self.target_tokens)
    }
}

pub(crate) fn mask_positions(tokens: &[String]) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| *t == MASK)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub token: String,
    pub prob: f64,
}

impl Candidate {
    pub fn new(token: impl Into<String>, prob: f64) -> Self {
        Candidate {
            token: token.into(),
            prob,
        }
    }
}

/// Candidate distribution for one mask, sorted by probability descending.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskPrediction {
    pub position: usize,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    pub top_k: usize,
    /// Zero selects the argmax.
    pub temperature: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            top_k: 16,
            temperature: 1.0,
        }
    }
}

impl SamplingConfig {
    pub fn argmax() -> Self {
        SamplingConfig {
            top_k: 1,
            temperature: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::config("sampling.top_k must be at least 1"));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::config("sampling.temperature must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Anything that can score candidates for masked positions.
///
/// Implementations must answer every request in `requests` in order and must
/// tolerate being called from several threads at once.
pub trait PredictorBackend: Send + Sync {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>>;
}

impl<B: PredictorBackend + ?Sized> PredictorBackend for std::sync::Arc<B> {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        (**self).predict_batch(requests)
    }
}

impl<B: PredictorBackend + ?Sized> PredictorBackend for &B {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        (**self).predict_batch(requests)
    }
}

pub fn predict_masks<B: PredictorBackend + ?Sized>(
    req: &PredictionRequest,
    backend: &B,
) -> Result<Vec<MaskPrediction>> {
    let mut out = predict_masks_batch(std::slice::from_ref(req), backend)?;
    Ok(out.pop().unwrap_or_default())
}

pub fn predict_masks_batch<B: PredictorBackend + ?Sized>(
    requests: &[PredictionRequest],
    backend: &B,
) -> Result<Vec<Vec<MaskPrediction>>> {
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    let raw = backend.predict_batch(requests)?;
    if raw.len() != requests.len() {
        return Err(Error::protocol(format!(
            "backend answered {} of {} requests",
            raw.len(),
            requests.len()
        )));
    }
    requests
        .iter()
        .zip(raw)
        .map(|(req, preds)| normalize_response(req, preds))
        .collect()
}

/// Checks coverage and turns log-probabilities into a renormalized top-k
/// distribution per mask.
pub fn normalize_response(req: &PredictionRequest, mut raw: Vec<RawPrediction>) -> Result<Vec<MaskPrediction>> {
    raw.sort_by_key(|p| p.position);
    let expected = req.mask_positions();
    let got: Vec<usize> = raw.iter().map(|p| p.position).collect();
    if got != expected {
        return Err(Error::protocol(format!(
            "request {}: predicted positions {got:?}, expected {expected:?}",
            req.id
        )));
    }
    raw.into_iter()
        .map(|p| {
            let candidates = normalize_candidates(p.candidates, req.top_k).map_err(|msg| {
                Error::protocol(format!("request {} position {}: {msg}", req.id, p.position))
            })?;
            Ok(MaskPrediction {
                position: p.position,
                candidates,
            })
        })
        .collect()
}

fn normalize_candidates(raw: Vec<wire::ScoredToken>, top_k: usize) -> std::result::Result<Vec<Candidate>, String> {
    if raw.iter().any(|c| c.logprob.is_nan()) {
        return Err("NaN logprob".into());
    }
    let mut kept: Vec<wire::ScoredToken> = raw
        .into_iter()
        .filter(|c| !c.token.is_empty() && c.token != MASK && c.logprob > f64::NEG_INFINITY)
        .collect();
    kept.sort_by(|a, b| {
        b.logprob
            .partial_cmp(&a.logprob)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.token.cmp(&b.token))
    });
    kept.dedup_by(|b, a| a.token == b.token);
    kept.truncate(top_k);
    let Some(max) = kept.first().map(|c| c.logprob) else {
        return Err("no usable candidates".into());
    };
    let weights: Vec<f64> = kept.iter().map(|c| (c.logprob - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(kept
        .into_iter()
        .zip(weights)
        .map(|(c, w)| Candidate::new(c.token, w / total))
        .collect())
}

/// Draws one replacement per mask, in ascending position order.
pub fn sample_replacements(
    preds: &[MaskPrediction],
    cfg: &SamplingConfig,
    rng: &mut RngStream,
) -> Result<Vec<(usize, String)>> {
    if preds.is_empty() {
        return Err(Error::protocol("no predictions to sample from"));
    }
    let mut order: Vec<&MaskPrediction> = preds.iter().collect();
    order.sort_by_key(|p| p.position);
    order
        .into_iter()
        .map(|p| {
            let token = sample_one(&p.candidates, cfg, rng)
                .ok_or_else(|| Error::protocol(format!("position {} has no candidates", p.position)))?;
            Ok((p.position, token.to_owned()))
        })
        .collect()
}

fn sample_one<'a>(candidates: &'a [Candidate], cfg: &SamplingConfig, rng: &mut RngStream) -> Option<&'a str> {
    let pool = &candidates[..cfg.top_k.max(1).min(candidates.len())];
    if pool.is_empty() {
        return None;
    }
    if cfg.temperature == 0.0 {
        return pool
            .iter()
            .min_by(|a, b| {
                b.prob
                    .partial_cmp(&a.prob)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a.token.cmp(&b.token))
            })
            .map(|c| c.token.as_str());
    }
    let inv_t = 1.0 / cfg.temperature;
    let weights: Vec<f64> = pool.iter().map(|c| c.prob.powf(inv_t)).collect();
    let total: f64 = weights.iter().sum();
    let u = rng.unit();
    let mut acc = 0.0;
    for (c, w) in pool.iter().zip(&weights) {
        acc += w / total;
        if u < acc {
            return Some(&c.token);
        }
    }
    pool.last().map(|c| c.token.as_str())
}

/// Replaces every mask with its sampled token.
pub fn infill(corrupted: &CorruptedSeq, samples: &[(usize, String)]) -> Result<TokenSeq> {
    let mut positions: Vec<usize> = samples.iter().map(|(p, _)| *p).collect();
    positions.sort_unstable();
    if positions != corrupted.mask_positions {
        return Err(Error::protocol(format!(
            "samples cover positions {positions:?}, masks are at {:?}",
            corrupted.mask_positions
        )));
    }
    let mut tokens = corrupted.tokens.clone();
    for (pos, token) in samples {
        if token.is_empty() || token == MASK {
            return Err(Error::protocol(format!("unusable replacement at position {pos}")));
        }
        tokens[*pos] = token.clone();
    }
    TokenSeq::new(tokens)
}
