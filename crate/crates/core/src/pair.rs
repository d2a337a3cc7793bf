//! Synthetic training pairs and their TSV file format.
//!
//! One pair per line: `source TAB target TAB provenance`, LF-terminated.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::text::MASK;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Nat,
    Rule,
    Other(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Nat => f.write_str("nat"),
            Provenance::Rule => f.write_str("rule"),
            Provenance::Other(tag) => f.write_str(tag),
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(Provenance::Nat),
            "rule" => Ok(Provenance::Rule),
            "" => Err(Error::Input("empty provenance tag".into())),
            s if s.chars().any(char::is_whitespace) => {
                Err(Error::Input(format!("provenance tag {s:?} contains whitespace")))
            }
            other => Ok(Provenance::Other(other.to_owned())),
        }
    }
}

/// An erroneous sentence and its correction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErroneousPair {
    pub source: String,
    pub target: String,
    pub record_id: usize,
    pub provenance: Provenance,
}

impl ErroneousPair {
    pub fn validate(&self) -> Result<()> {
        for (what, text) in [("source", &self.source), ("target", &self.target)] {
            if text.trim().is_empty() {
                return Err(Error::Input(format!("record {}: empty {what}", self.record_id)));
            }
            if text.contains(['\t', '\n', '\r']) {
                return Err(Error::Input(format!("record {}: {what} contains a tab or newline", self.record_id)));
            }
        }
        if self.source.contains(MASK) {
            return Err(Error::Input(format!("record {}: source contains {MASK}", self.record_id)));
        }
        Ok(())
    }

    pub fn to_tsv_line(&self) -> String {
        format!("{}\t{}\t{}\n", self.source, self.target, self.provenance)
    }
}

pub fn write_pair<W: Write>(w: &mut W, pair: &ErroneousPair) -> std::io::Result<()> {
    w.write_all(pair.to_tsv_line().as_bytes())
}

/// Reads a pair file. Record ids are 0-based line numbers.
pub fn read_pairs(path: &Path) -> Result<Vec<ErroneousPair>> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut pairs = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let parse_err = |msg: String| Error::Parse {
            path: path.to_owned(),
            line: n + 1,
            msg,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [source, target, prov] = fields[..] else {
            return Err(parse_err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        };
        let pair = ErroneousPair {
            source: source.to_owned(),
            target: target.to_owned(),
            record_id: n,
            provenance: prov.parse().map_err(|e: Error| parse_err(e.to_string()))?,
        };
        pair.validate().map_err(|e| parse_err(e.to_string()))?;
        pairs.push(pair);
    }
    Ok(pairs)
}
