use std::time::Duration;

use super::wire::{HealthBody, PredictRequestBody, PredictResponseBody, RawPrediction, RequestItem, HEALTH_PATH, PREDICT_PATH};
use super::{PredictionRequest, PredictorBackend};
use crate::error::{Error, Result};

pub const DEFAULT_BATCH_SIZE: usize = 32;

/// HTTP client for a predictor server.
///
/// Transport failures and 5xx answers map to [`Error::BackendUnavailable`];
/// 4xx answers and malformed bodies map to [`Error::ProtocolViolation`].
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    base_url: String,
    agent: ureq::Agent,
    batch_size: usize,
}

impl RemoteBackend {
    pub fn new(base_url: impl Into<String>) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(Duration::from_secs(5))
            .timeout(Duration::from_secs(120))
            .build();
        RemoteBackend {
            base_url: base_url.into().trim_end_matches('/').to_owned(),
            agent,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn health(&self) -> Result<()> {
        let url = format!("{}{HEALTH_PATH}", self.base_url);
        let body = self.agent.get(&url).call().map_err(map_err)?.into_string().map_err(|e| {
            Error::BackendUnavailable(format!("reading health response: {e}"))
        })?;
        let health: HealthBody =
            serde_json::from_str(&body).map_err(|e| Error::protocol(format!("health body: {e}")))?;
        if health.status != "ok" {
            return Err(Error::BackendUnavailable(format!("status {}", health.status)));
        }
        Ok(())
    }

    fn post_chunk(&self, chunk: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        let body = PredictRequestBody {
            items: chunk.iter().map(RequestItem::from).collect(),
        };
        let payload = serde_json::to_string(&body).expect("request body serializes");
        let url = format!("{}{PREDICT_PATH}", self.base_url);
        let text = self
            .agent
            .post(&url)
            .set("Content-Type", "application/json")
            .send_string(&payload)
            .map_err(map_err)?
            .into_string()
            .map_err(|e| Error::BackendUnavailable(format!("reading response: {e}")))?;
        let response: PredictResponseBody =
            serde_json::from_str(&text).map_err(|e| Error::protocol(format!("response body: {e}")))?;
        if response.items.len() != chunk.len() {
            return Err(Error::protocol(format!(
                "sent {} items, received {}",
                chunk.len(),
                response.items.len()
            )));
        }
        chunk
            .iter()
            .zip(response.items)
            .map(|(req, item)| {
                if item.id != req.id {
                    return Err(Error::protocol(format!("expected item {}, received {}", req.id, item.id)));
                }
                Ok(item.predictions)
            })
            .collect()
    }
}

fn map_err(e: ureq::Error) -> Error {
    match e {
        ureq::Error::Status(code, resp) if code >= 500 => Error::BackendUnavailable(format!(
            "HTTP {code}: {}",
            resp.into_string().unwrap_or_default()
        )),
        ureq::Error::Status(code, resp) => {
            Error::protocol(format!("HTTP {code}: {}", resp.into_string().unwrap_or_default()))
        }
        ureq::Error::Transport(t) => Error::BackendUnavailable(t.to_string()),
    }
}

impl PredictorBackend for RemoteBackend {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        let mut out = Vec::with_capacity(requests.len());
        for chunk in requests.chunks(self.batch_size) {
            out.extend(self.post_chunk(chunk)?);
        }
        Ok(out)
    }
}
