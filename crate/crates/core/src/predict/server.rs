use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use log::{debug, warn};
use tiny_http::{Header, Method, Request, Response, Server};

use super::wire::{HealthBody, PredictRequestBody, PredictResponseBody, ResponseItem, HEALTH_PATH, PREDICT_PATH};
use super::{PredictionRequest, PredictorBackend};
use crate::error::{Error, Result};
use crate::text::MASK;

const HANDLER_THREADS: usize = 4;

/// Serves any [`PredictorBackend`] over the predictor wire protocol.
pub struct StubServer {
    server: Arc<Server>,
    addr: SocketAddr,
    handlers: Vec<JoinHandle<()>>,
}

impl StubServer {
    /// Binds `addr` (use port 0 for an ephemeral port) and starts serving.
    pub fn spawn(backend: Arc<dyn PredictorBackend>, addr: &str) -> Result<Self> {
        let server = Server::http(addr)
            .map_err(|e| Error::io(format!("binding {addr}"), std::io::Error::other(e.to_string())))?;
        let addr = server
            .server_addr()
            .to_ip()
            .ok_or_else(|| Error::config("stub server must listen on an IP address"))?;
        let server = Arc::new(server);
        let handlers = (0..HANDLER_THREADS)
            .map(|_| {
                let server = Arc::clone(&server);
                let backend = Arc::clone(&backend);
                std::thread::spawn(move || {
                    for request in server.incoming_requests() {
                        handle(request, backend.as_ref());
                    }
                })
            })
            .collect();
        Ok(StubServer { server, addr, handlers })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Blocks until the server is shut down from another thread or killed.
    pub fn join(mut self) {
        for h in self.handlers.drain(..) {
            let _ = h.join();
        }
    }

    pub fn shutdown(mut self) {
        self.stop();
    }

    fn stop(&mut self) {
        for _ in 0..self.handlers.len() {
            self.server.unblock();
        }
        for h in self.handlers.drain(..) {
            let _ = h.join();
        }
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop();
    }
}

fn json_header() -> Header {
    Header::from_bytes("Content-Type", "application/json").expect("static header")
}

fn respond(request: Request, status: u16, body: String) {
    let response = Response::from_string(body)
        .with_status_code(status)
        .with_header(json_header());
    if let Err(e) = request.respond(response) {
        warn!("failed to send response: {e}");
    }
}

fn error_body(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn handle(mut request: Request, backend: &dyn PredictorBackend) {
    let path = request.url().split('?').next().unwrap_or("").to_owned();
    match (request.method(), path.as_str()) {
        (Method::Get, HEALTH_PATH) => {
            let body = serde_json::to_string(&HealthBody { status: "ok".into() }).expect("serializes");
            respond(request, 200, body);
        }
        (Method::Post, PREDICT_PATH) => {
            let mut text = String::new();
            if let Err(e) = request.as_reader().read_to_string(&mut text) {
                respond(request, 400, error_body(&format!("unreadable body: {e}")));
                return;
            }
            let (status, body) = predict(&text, backend);
            respond(request, status, body);
        }
        _ => respond(request, 404, error_body("not found")),
    }
}

/// Returns the HTTP status and JSON body for one predict call.
pub(crate) fn predict(text: &str, backend: &dyn PredictorBackend) -> (u16, String) {
    let body: PredictRequestBody = match serde_json::from_str(text) {
        Ok(b) => b,
        Err(e) => return (400, error_body(&format!("malformed request: {e}"))),
    };
    let mut requests = Vec::with_capacity(body.items.len());
    for item in body.items {
        if item.mask_token != MASK {
            return (400, error_body(&format!("unsupported mask token {:?}", item.mask_token)));
        }
        match PredictionRequest::new(item.id, item.source, item.target_tokens, item.top_k) {
            Ok(r) => requests.push(r),
            Err(e) => return (400, error_body(&e.to_string())),
        }
    }
    debug!("predict: {} items", requests.len());
    match backend.predict_batch(&requests) {
        Ok(preds) => {
            let items = requests
                .into_iter()
                .zip(preds)
                .map(|(r, predictions)| ResponseItem { id: r.id, predictions })
                .collect();
            let body = serde_json::to_string(&PredictResponseBody { items }).expect("serializes");
            (200, body)
        }
        Err(Error::ProtocolViolation(msg)) => (400, error_body(&msg)),
        Err(e) => (503, error_body(&e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predict::LexiconBackend;

    #[test]
    fn zero_mask_request_is_400() {
        let lex = LexiconBackend::from_counts([("a", 1)]).unwrap();
        let body = r#"{"items":[{"id":"0","source":"x","target_tokens":["a"],"mask_token":"[MASK]","top_k":1}]}"#;
        assert_eq!(predict(body, &lex).0, 400);
        assert_eq!(predict("{", &lex).0, 400);
    }

    #[test]
    fn predicts_positions() {
        let lex = LexiconBackend::from_counts([("a", 1)]).unwrap();
        let body = r#"{"items":[{"id":"0","source":"x","target_tokens":["a","[MASK]"],"mask_token":"[MASK]","top_k":1}]}"#;
        let (status, text) = predict(body, &lex);
        assert_eq!(status, 200);
        let resp: PredictResponseBody = serde_json::from_str(&text).unwrap();
        assert_eq!(resp.items[0].predictions[0].position, 1);
    }
}
