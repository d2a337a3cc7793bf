//! JSON bodies of the predictor HTTP protocol.
//!
//! `POST /v1/predict` takes a [`PredictRequestBody`] and answers with a
//! [`PredictResponseBody`]; `GET /healthz` answers `{"status":"ok"}`.

use serde::{Deserialize, Serialize};

use super::PredictionRequest;
use crate::text::MASK;

pub const PREDICT_PATH: &str = "/v1/predict";
pub const HEALTH_PATH: &str = "/healthz";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictRequestBody {
    pub items: Vec<RequestItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestItem {
    pub id: String,
    pub source: String,
    pub target_tokens: Vec<String>,
    pub mask_token: String,
    pub top_k: usize,
}

impl From<&PredictionRequest> for RequestItem {
    fn from(r: &PredictionRequest) -> Self {
        RequestItem {
            id: r.id.clone(),
            source: r.source_en.clone(),
            target_tokens: r.target_tokens.clone(),
            mask_token: MASK.to_owned(),
            top_k: r.top_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictResponseBody {
    pub items: Vec<ResponseItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseItem {
    pub id: String,
    pub predictions: Vec<RawPrediction>,
}

/// Unnormalized predictions for one mask position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPrediction {
    pub position: usize,
    pub candidates: Vec<ScoredToken>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredToken {
    pub token: String,
    pub logprob: f64,
}

impl ScoredToken {
    pub fn new(token: impl Into<String>, logprob: f64) -> Self {
        ScoredToken {
            token: token.into(),
            logprob,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthBody {
    pub status: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_body_shape() {
        let body = PredictRequestBody {
            items: vec![RequestItem {
                id: "7".into(),
                source: "I went".into(),
                target_tokens: vec!["ich".into(), MASK.into()],
                mask_token: MASK.into(),
                top_k: 2,
            }],
        };
        let json = serde_json::to_string(&body).unwrap();
        assert_eq!(
            json,
            r#"{"items":[{"id":"7","source":"I went","target_tokens":["ich","[MASK]"],"mask_token":"[MASK]","top_k":2}]}"#
        );
    }

    #[test]
    fn response_body_parses() {
        let json = r#"{"items":[{"id":"7","predictions":[{"position":1,"candidates":[{"token":"ging","logprob":-0.1}]}]}]}"#;
        let body: PredictResponseBody = serde_json::from_str(json).unwrap();
        assert_eq!(body.items[0].predictions[0].candidates[0].token, "ging");
    }
}
