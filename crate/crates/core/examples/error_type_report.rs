// Classify the edits of a few pairs and print the type distribution.

use gecsynth::errortypes::{pair_edit_types, type_distribution};
use gecsynth::{ErroneousPair, LangProfile, Provenance};

pub fn run_example() -> anyhow::Result<()> {
    let pairs: Vec<ErroneousPair> = [
        ("Der Mann liest Buch .", "Der Mann liest das Buch ."),
        ("Die Frau kauft kauft die Tasche .", "Die Frau kauft die Tasche ."),
        ("das Kind sieht den Tisch .", "Das Kind sieht den Tisch ."),
        ("Mein Bruder findet den Berif .", "Mein Bruder findet den Brief ."),
        ("Der Arzt heute liest .", "Der Arzt liest heute ."),
        ("Er sagt , dass er kommt !", "Er sagt , dass er kommt ."),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, (s, t))| ErroneousPair {
        source: s.into(),
        target: t.into(),
        record_id: i,
        provenance: Provenance::Nat,
    })
    .collect();

    let profile = LangProfile::whitespace();
    for p in &pairs {
        for (e, t) in pair_edit_types(p, &profile)? {
            println!("{:<12} {}..{} -> {:?}", t.as_str(), e.start, e.end, e.replacement);
        }
    }
    let hist = type_distribution(&pairs, &profile)?;
    for (t, ratio) in hist.ranked() {
        println!("{} {ratio:.4}", t.as_str());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
