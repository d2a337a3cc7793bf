use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use super::corpus::LineReader;
use super::stats::{sidecar_path, write_json};
use crate::error::{Error, Result};
use crate::pair::{write_pair, ErroneousPair};
use crate::rng::{derive_record_rng, stage};
use crate::rulegen::{make_rule_pair, ConfusionSet, RuleConfig};
use crate::text::{tokenize, LangProfile, MASK};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RuleStats {
    pub records_read: usize,
    pub emitted: usize,
    pub skipped: usize,
}

const CHUNK: usize = 4096;

/// Rule pairs for in-memory sentences; entry `i` uses record id `i`.
pub fn rule_pairs<S: AsRef<str> + Sync>(
    sentences: &[S],
    cfg: &RuleConfig,
    cs: Option<&ConfusionSet>,
    profile: &LangProfile,
    seed: u64,
) -> Result<Vec<ErroneousPair>> {
    cfg.validate(profile)?;
    sentences
        .par_iter()
        .enumerate()
        .map(|(id, s)| one(id, s.as_ref(), cfg, cs, profile, seed))
        .filter_map(|r| r.transpose())
        .collect()
}

fn one(id: usize, line: &str, cfg: &RuleConfig, cs: Option<&ConfusionSet>, profile: &LangProfile, seed: u64) -> Result<Option<ErroneousPair>> {
    if line.contains('\t') || line.contains(MASK) {
        return Ok(None);
    }
    let Ok(seq) = tokenize(line, profile) else {
        return Ok(None);
    };
    let mut rng = derive_record_rng(seed, id as u64, stage::RULE);
    make_rule_pair(&seq, cfg, cs, profile, &mut rng, id).map(Some)
}

/// Corrupts every line of a monolingual file and writes pair TSV plus a
/// `.stats.json` sidecar.
pub fn rule_corrupt_file(
    input: &Path,
    output: &Path,
    cfg: &RuleConfig,
    cs: Option<&ConfusionSet>,
    profile: &LangProfile,
    seed: u64,
    workers: usize,
) -> Result<RuleStats> {
    cfg.validate(profile)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;
    let file = File::create(output).map_err(|e| Error::io(format!("creating {}", output.display()), e))?;
    let mut w = BufWriter::new(file);
    let mut stats = RuleStats::default();
    let mut lines = LineReader::open(input)?.enumerate();
    loop {
        let mut chunk: Vec<(usize, std::result::Result<String, String>)> = Vec::with_capacity(CHUNK);
        for (id, line) in lines.by_ref().take(CHUNK) {
            chunk.push((id, line?));
        }
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Result<Option<ErroneousPair>>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|(id, line)| match line {
                    Ok(l) => one(*id, l, cfg, cs, profile, seed),
                    Err(_) => Ok(None),
                })
                .collect()
        });
        for ((id, _), r) in chunk.iter().zip(results) {
            stats.records_read += 1;
            match r? {
                Some(pair) => {
                    write_pair(&mut w, &pair).map_err(|e| Error::io("writing output", e))?;
                    stats.emitted += 1;
                }
                None => {
                    warn!("line {}: skipped (empty, tab, invalid UTF-8 or reserved token)", id + 1);
                    stats.skipped += 1;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::io("flushing output", e))?;
    write_json(&stats, &sidecar_path(output, ".stats.json"))?;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("mono.txt");
        let output = dir.path().join("pairs.tsv");
        std::fs::write(&input, "Das ist gut .\n\nein [MASK] hier\nNoch ein Satz\n").unwrap();
        let stats = rule_corrupt_file(&input, &output, &RuleConfig::default(), None, &LangProfile::whitespace(), 1, 2).unwrap();
        assert_eq!(stats, RuleStats { records_read: 4, emitted: 2, skipped: 2 });
        let text = std::fs::read_to_string(&output).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().all(|l| l.ends_with("\trule")));
        assert!(sidecar_path(&output, ".stats.json").exists());
    }

    #[test]
    fn in_memory_is_deterministic() {
        let sents = ["Das ist ein Test", "Hallo Welt", "Noch ein Satz hier"];
        let a = rule_pairs(&sents, &RuleConfig::default(), None, &LangProfile::whitespace(), 9).unwrap();
        let b = rule_pairs(&sents, &RuleConfig::default(), None, &LangProfile::whitespace(), 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }
}
