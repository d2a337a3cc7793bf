//! Protocol conformance checks for any predictor server.
//!
//! The same suite runs against the built-in stub server in tests and can be
//! pointed at an external model server.

use std::fmt;

use super::wire::{HEALTH_PATH, PREDICT_PATH};
use super::{predict_masks, predict_masks_batch, PredictionRequest, RemoteBackend};
use crate::text::MASK;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark} {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome { name, passed: true, detail },
        Err(detail) => CheckOutcome { name, passed: false, detail },
    }
}

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

fn sample_requests(top_k: usize) -> Vec<PredictionRequest> {
    [
        ("c0", "I go to school", "ich [MASK] zur Schule"),
        ("c1", "the small house is red", "das [MASK] Haus ist [MASK]"),
        ("c2", "we went home", "[MASK] gingen [MASK] [MASK]"),
    ]
    .into_iter()
    .map(|(id, en, tgt)| PredictionRequest::new(id, en, toks(tgt), top_k).expect("sample has masks"))
    .collect()
}

fn status_of(agent: &ureq::Agent, url: &str, body: &str) -> Result<u16, String> {
    match agent.post(url).set("Content-Type", "application/json").send_string(body) {
        Ok(r) => Ok(r.status()),
        Err(ureq::Error::Status(code, _)) => Ok(code),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs every check against `base_url` and returns one outcome per check.
pub fn run_conformance(base_url: &str, top_k: usize) -> Vec<CheckOutcome> {
    let client = RemoteBackend::new(base_url);
    let agent = ureq::Agent::new();
    let predict_url = format!("{}{PREDICT_PATH}", client.base_url());
    let requests = sample_requests(top_k);
    let mut out = Vec::new();

    out.push(outcome(
        "health",
        client
            .health()
            .map(|()| format!("GET {HEALTH_PATH} -> ok"))
            .map_err(|e| e.to_string()),
    ));

    out.push(outcome(
        "position_coverage",
        (|| {
            for req in &requests {
                let preds = predict_masks(req, &client).map_err(|e| e.to_string())?;
                let got: Vec<usize> = preds.iter().map(|p| p.position).collect();
                if got != req.mask_positions() {
                    return Err(format!("{}: positions {got:?}", req.id));
                }
            }
            Ok(format!("{} requests covered", requests.len()))
        })(),
    ));

    out.push(outcome(
        "normalization",
        (|| {
            let batch = predict_masks_batch(&requests, &client).map_err(|e| e.to_string())?;
            for (req, preds) in requests.iter().zip(&batch) {
                for p in preds {
                    let sum: f64 = p.candidates.iter().map(|c| c.prob).sum();
                    if (sum - 1.0).abs() > 1e-6 {
                        return Err(format!("{} position {}: probs sum to {sum}", req.id, p.position));
                    }
                    if p.candidates.is_empty() || p.candidates.len() > req.top_k {
                        return Err(format!("{} position {}: {} candidates", req.id, p.position, p.candidates.len()));
                    }
                    if p.candidates.windows(2).any(|w| w[0].prob < w[1].prob) {
                        return Err(format!("{} position {}: not sorted", req.id, p.position));
                    }
                    if p.candidates.iter().any(|c| c.token == MASK || c.token.is_empty()) {
                        return Err(format!("{} position {}: unusable candidate", req.id, p.position));
                    }
                }
            }
            Ok("probabilities sum to 1 within 1e-6".into())
        })(),
    ));

    out.push(outcome(
        "batching_equivalence",
        (|| {
            let batched = predict_masks_batch(&requests, &client).map_err(|e| e.to_string())?;
            for (req, b) in requests.iter().zip(&batched) {
                let single = predict_masks(req, &client).map_err(|e| e.to_string())?;
                if &single != b {
                    return Err(format!("{} differs between batched and single calls", req.id));
                }
            }
            Ok("batched == unbatched".into())
        })(),
    ));

    let zero_masks = r#"{"items":[{"id":"z","source":"x","target_tokens":["a","b"],"mask_token":"[MASK]","top_k":2}]}"#;
    out.push(outcome(
        "zero_masks_rejected",
        status_of(&agent, &predict_url, zero_masks).and_then(|s| {
            if s == 400 {
                Ok("HTTP 400".into())
            } else {
                Err(format!("HTTP {s}, expected 400"))
            }
        }),
    ));

    out.push(outcome(
        "malformed_rejected",
        status_of(&agent, &predict_url, "{not json").and_then(|s| {
            if s == 400 {
                Ok("HTTP 400".into())
            } else {
                Err(format!("HTTP {s}, expected 400"))
            }
        }),
    ));

    out
}
