// Full generation run over a small bitext with the lexicon backend.

use std::io::Write;

use gecsynth::pipeline::{generate_dataset, BitextCorpus, GenerateSettings};
use gecsynth::{LexiconBackend, NoiseConfig, PostEditConfig};

pub fn run_example() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("bitext.tsv");
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "The man reads the book .\tDer Mann liest das Buch .")?;
    writeln!(f, "My sister buys the red bag .\tMeine Schwester kauft die rote Tasche .")?;
    writeln!(f, "The child needs a letter today .\tDas Kind braucht einen Brief heute .")?;
    writeln!(f, "broken line without a tab")?;
    drop(f);

    let lexicon = LexiconBackend::from_counts([("der", 6), ("die", 5), ("das", 5), ("ein", 3), ("nicht", 2)])?;
    let settings = GenerateSettings {
        noise: NoiseConfig::german(),
        postedit: PostEditConfig::german(),
        seed: 11,
        workers: 2,
        ..Default::default()
    };
    let mut out = Vec::new();
    let stats = generate_dataset(&BitextCorpus::Tsv(path), &settings, &lexicon, &mut out)?;
    print!("{}", String::from_utf8(out)?);
    println!(
        "read {} emitted {} filtered {} masks filled {}/{}",
        stats.records_read, stats.emitted, stats.filtered, stats.masks_filled, stats.masks_total
    );
    assert!(stats.is_balanced());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
