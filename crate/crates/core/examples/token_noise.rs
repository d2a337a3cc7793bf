// Token-level masking noise with the German parameters.

use gecsynth::noise::expected_mask_fraction;
use gecsynth::rng::stage;
use gecsynth::{apply_token_noise, derive_record_rng, tokenize, LangProfile, NoiseConfig, NoiseOp};

pub fn run_example() -> anyhow::Result<()> {
    let cfg = NoiseConfig::german();
    println!("expected mask fraction {:.2}", expected_mask_fraction(&cfg));

    let seq = tokenize("Meine Schwester kauft am Abend den kleinen Apfel .", &LangProfile::whitespace())?;
    for record in 0..4 {
        let mut rng = derive_record_rng(1, record, stage::NOISER);
        let out = apply_token_noise(&seq, &cfg, &mut rng)?;
        println!(
            "{}  (masks at {:?}, {} deletes, {} swaps)",
            out.tokens.join(" "),
            out.mask_positions,
            out.count(NoiseOp::Delete),
            out.count(NoiseOp::Swap)
        );
        assert!(!out.tokens.is_empty());
    }

    let mut rng = derive_record_rng(1, 0, stage::NOISER);
    let same = apply_token_noise(&seq, &NoiseConfig::disabled(), &mut rng)?;
    assert_eq!(same.tokens, seq.tokens());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
