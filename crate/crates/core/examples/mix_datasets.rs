// Sample from two pair files and shuffle them together.

use gecsynth::pipeline::mix_datasets;

pub fn run_example() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let a = dir.path().join("nat.tsv");
    let b = dir.path().join("rule.tsv");
    let rows = |tag: &str, n: usize| -> String {
        (0..n).map(|i| format!("{tag} fehler {i}\t{tag} satz {i}\t{tag}\n")).collect()
    };
    std::fs::write(&a, rows("nat", 10))?;
    std::fs::write(&b, rows("rule", 10))?;

    let mut out = Vec::new();
    let stats = mix_datasets(&a, &b, 3, 2, 0, &mut out)?;
    print!("{}", String::from_utf8(out)?);
    println!("{stats:?}");
    assert_eq!((stats.taken_a, stats.taken_b), (3, 2));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
