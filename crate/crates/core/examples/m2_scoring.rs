// Max-Match scoring of system output against two annotators.

use gecsynth::m2::{evaluate_corpus, extract_edits, f_beta, parse_m2_str, ExtractOptions, ScoreOptions};

const GOLD: &str = "S Der Mann lesen das Buch
A 2 3|||VERB|||liest|||REQUIRED|||-NONE-|||0
A 2 3|||VERB|||las|||REQUIRED|||-NONE-|||1

S Sie kauft rote Tasche .
A 2 2|||DET|||die|||REQUIRED|||-NONE-|||0
";

pub fn run_example() -> anyhow::Result<()> {
    let gold = parse_m2_str(GOLD)?;
    let hyps: Vec<Vec<String>> = ["Der Mann las das Buch", "Sie kauft eine rote Tasche ."]
        .iter()
        .map(|s| s.split_whitespace().map(str::to_owned).collect())
        .collect();

    for (sent, hyp) in gold.iter().zip(&hyps) {
        let edits = extract_edits(&sent.source, hyp, &sent.annotations[&0], ExtractOptions::default());
        println!("{:?}", edits.iter().map(|e| (e.start, e.end, e.replacement.join(" "))).collect::<Vec<_>>());
    }
    let report = evaluate_corpus(&hyps, &gold, &ScoreOptions::default())?;
    println!("TP {} FP {} FN {}", report.tp, report.fp, report.fn_);
    println!("P R F0.5: {}", report.summary_line());
    assert_eq!((report.tp, report.fp, report.fn_), (1, 1, 1));
    println!("F0.5 for P=45.95 R=27.94: {:.2}", f_beta(45.95, 27.94, 0.5));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
