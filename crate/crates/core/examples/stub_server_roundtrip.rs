// Serve a backend over HTTP and query it through the remote client.

use std::sync::Arc;

use gecsynth::predict::{predict_masks, EchoBackend, PredictionRequest};
use gecsynth::{LexiconBackend, PredictorBackend, RemoteBackend, StubServer};

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

pub fn run_example() -> anyhow::Result<()> {
    let lexicon: Arc<dyn PredictorBackend> = Arc::new(LexiconBackend::from_counts([("das", 3), ("ein", 1)])?);
    let server = StubServer::spawn(lexicon.clone(), "127.0.0.1:0")?;
    let remote = RemoteBackend::new(server.url());
    remote.health()?;

    let req = PredictionRequest::new("r1", "I read the book", toks("ich lese [MASK] Buch"), 2)?;
    let over_http = predict_masks(&req, &remote)?;
    let in_process = predict_masks(&req, &lexicon)?;
    println!("{over_http:?}");
    assert_eq!(over_http, in_process);
    server.shutdown();

    let echo = EchoBackend::new().with_default([(1, "gehe")]);
    let server = StubServer::spawn(Arc::new(echo), "127.0.0.1:0")?;
    let req = PredictionRequest::new("r2", "I go home", toks("ich [MASK] nach Hause"), 4)?;
    let preds = predict_masks(&req, &RemoteBackend::new(server.url()))?;
    println!("echo answered {:?}", preds[0].candidates);
    assert_eq!(preds[0].candidates[0].token, "gehe");
    server.shutdown();
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
