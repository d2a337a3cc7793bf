// Masked infill: ask a backend for candidates, then sample one per mask.

use gecsynth::predict::{infill, predict_masks, sample_replacements, PredictionRequest};
use gecsynth::rng::stage;
use gecsynth::{apply_token_noise, derive_record_rng, tokenize, LangProfile, LexiconBackend, NoiseConfig, SamplingConfig};

pub fn run_example() -> anyhow::Result<()> {
    let lexicon = LexiconBackend::from_counts([("der", 5), ("die", 4), ("das", 4), ("Buch", 2), ("liest", 1)])?;
    let english = "The man reads the book .";
    let seq = tokenize("Der Mann liest das Buch .", &LangProfile::whitespace())?;

    let noise = NoiseConfig::new(0.5, 1.0, 0.0, 0.0, 0.0);
    let mut rng = derive_record_rng(3, 0, stage::NOISER);
    let corrupted = apply_token_noise(&seq, &noise, &mut rng)?;
    println!("masked:  {}", corrupted.tokens.join(" "));
    if corrupted.mask_positions.is_empty() {
        return Ok(());
    }

    let sampling = SamplingConfig::default();
    let req = PredictionRequest::new("0", english, corrupted.tokens.clone(), sampling.top_k)?;
    let preds = predict_masks(&req, &lexicon)?;
    for p in &preds {
        let top: Vec<String> = p.candidates.iter().take(3).map(|c| format!("{} {:.2}", c.token, c.prob)).collect();
        println!("position {}: {}", p.position, top.join(", "));
    }
    let mut rng = derive_record_rng(3, 0, stage::SAMPLER);
    let samples = sample_replacements(&preds, &sampling, &mut rng)?;
    let filled = infill(&corrupted, &samples)?;
    println!("filled:  {}", filled.tokens().join(" "));
    assert!(!filled.contains_mask());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
