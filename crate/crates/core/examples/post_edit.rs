// Character-level post edit on a detokenized sentence.

use gecsynth::rng::stage;
use gecsynth::{apply_char_noise, derive_record_rng, LangProfile, PostEditConfig};

pub fn run_example() -> anyhow::Result<()> {
    let text = "Unser Lehrer verkauft die rote Tasche in der Stadt .";
    let profile = LangProfile::whitespace();
    let heavy = PostEditConfig { p_noise: 0.15, ..PostEditConfig::german() };
    for record in 0..3 {
        let mut rng = derive_record_rng(9, record, stage::POSTEDIT);
        let noisy = apply_char_noise(text, &heavy, &profile, &mut rng)?;
        println!("{noisy}");
    }
    let mut rng = derive_record_rng(9, 0, stage::POSTEDIT);
    assert_eq!(apply_char_noise(text, &PostEditConfig::disabled(), &profile, &mut rng)?, text);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
