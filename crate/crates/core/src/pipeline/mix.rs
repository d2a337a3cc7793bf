use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::corpus::LineReader;
use crate::error::{Error, Result};
use crate::pair::{write_pair, ErroneousPair};
use crate::rng::{derive_record_rng, stage, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MixStats {
    pub available_a: usize,
    pub available_b: usize,
    pub taken_a: usize,
    pub taken_b: usize,
}

/// Algorithm R over the lines of a pair file.
fn reservoir(path: &Path, n: usize, rng: &mut RngStream) -> Result<(Vec<ErroneousPair>, usize)> {
    let mut kept: Vec<ErroneousPair> = Vec::with_capacity(n);
    let mut seen = 0usize;
    for (line_no, line) in LineReader::open(path)?.enumerate() {
        let line = line?.map_err(|msg| Error::Parse {
            path: path.to_owned(),
            line: line_no + 1,
            msg,
        })?;
        let pair = parse_pair_line(&line, line_no).map_err(|msg| Error::Parse {
            path: path.to_owned(),
            line: line_no + 1,
            msg,
        })?;
        if seen < n {
            kept.push(pair);
        } else {
            let j = rng.below(seen + 1);
            if j < n {
                kept[j] = pair;
            }
        }
        seen += 1;
    }
    if seen < n {
        return Err(Error::Count {
            what: path.display().to_string(),
            requested: n,
            available: seen,
        });
    }
    Ok((kept, seen))
}

fn parse_pair_line(line: &str, line_no: usize) -> std::result::Result<ErroneousPair, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    let [source, target, prov] = fields[..] else {
        return Err(format!("expected 3 tab-separated fields, found {}", fields.len()));
    };
    let pair = ErroneousPair {
        source: source.to_owned(),
        target: target.to_owned(),
        record_id: line_no,
        provenance: prov.parse().map_err(|e: Error| e.to_string())?,
    };
    pair.validate().map_err(|e| e.to_string())?;
    Ok(pair)
}

/// Samples `n_a` pairs from `a` and `n_b` from `b`, shuffles the union and
/// writes it. Provenance tags are carried through unchanged.
pub fn mix_datasets<W: Write>(a: &Path, b: &Path, n_a: usize, n_b: usize, seed: u64, out: &mut W) -> Result<MixStats> {
    let (from_a, available_a) = reservoir(a, n_a, &mut derive_record_rng(seed, 0, stage::MIX_A))?;
    let (from_b, available_b) = reservoir(b, n_b, &mut derive_record_rng(seed, 0, stage::MIX_B))?;
    let mut union: Vec<ErroneousPair> = from_a.into_iter().chain(from_b).collect();
    let mut rng = derive_record_rng(seed, 0, stage::MIX_SHUFFLE);
    for i in (1..union.len()).rev() {
        let j = rng.below(i + 1);
        union.swap(i, j);
    }
    for pair in &union {
        write_pair(out, pair).map_err(|e| Error::io("writing mixed output", e))?;
    }
    out.flush().map_err(|e| Error::io("flushing mixed output", e))?;
    Ok(MixStats {
        available_a,
        available_b,
        taken_a: n_a,
        taken_b: n_b,
    })
}

pub fn mix_to_file(a: &Path, b: &Path, n_a: usize, n_b: usize, seed: u64, output: &Path) -> Result<MixStats> {
    let file = File::create(output).map_err(|e| Error::io(format!("creating {}", output.display()), e))?;
    let mut w = BufWriter::new(file);
    mix_datasets(a, b, n_a, n_b, seed, &mut w)
}
