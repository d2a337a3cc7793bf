// Run the wire protocol conformance checks against a local stub server.

use std::sync::Arc;

use gecsynth::predict::conformance::run_conformance;
use gecsynth::{LexiconBackend, StubServer};

pub fn run_example() -> anyhow::Result<()> {
    let lexicon = LexiconBackend::from_counts([("der", 4), ("die", 3), ("das", 3), ("Haus", 1)])?;
    let server = StubServer::spawn(Arc::new(lexicon), "127.0.0.1:0")?;
    let outcomes = run_conformance(&server.url(), 16);
    for o in &outcomes {
        println!("{o}");
    }
    server.shutdown();
    anyhow::ensure!(outcomes.iter().all(|o| o.passed), "conformance failed");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
