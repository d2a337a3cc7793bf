// Rule-based corruption with a small confusion set.

use gecsynth::pipeline::rule_pairs;
use gecsynth::rulegen::{ConfusionSet, RuleConfig};
use gecsynth::LangProfile;

pub fn run_example() -> anyhow::Result<()> {
    let mut cs = ConfusionSet::new();
    cs.insert("das", ["dass", "der"])?;
    cs.insert("den", ["dem", "denn"])?;

    let sentences = [
        "Der Arzt findet das alte Auto .",
        "Das Kind braucht den Tisch zu Hause .",
        "Mein Bruder sieht das neue Bild am Abend .",
    ];
    let cfg = RuleConfig { p_noise: 0.3, ..RuleConfig::default() };
    let pairs = rule_pairs(&sentences, &cfg, Some(&cs), &LangProfile::whitespace(), 5)?;
    for p in &pairs {
        println!("{}\t{}", p.source, p.target);
        assert_eq!(p.target, sentences[p.record_id]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
