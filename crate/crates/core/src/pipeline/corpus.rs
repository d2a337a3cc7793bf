//! Streaming bitext readers.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::text::{SentencePair, MASK};

/// A line-aligned parallel corpus: either one `english TAB target` TSV file
/// or two files with one sentence per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitextCorpus {
    Tsv(PathBuf),
    Parallel { english: PathBuf, target: PathBuf },
}

/// A line that could not be used. It still consumes its record id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Malformed {
    pub id: usize,
    pub reason: String,
}

pub type CorpusItem = std::result::Result<SentencePair, Malformed>;

impl BitextCorpus {
    pub fn records(&self) -> Result<Box<dyn Iterator<Item = Result<CorpusItem>> + Send>> {
        match self {
            BitextCorpus::Tsv(path) => {
                let lines = LineReader::open(path)?;
                Ok(Box::new(lines.enumerate().map(|(id, line)| {
                    let line = line?;
                    Ok(line.and_then(|l| match l.split('\t').collect::<Vec<_>>()[..] {
                        [en, tgt] => Ok((en.to_owned(), tgt.to_owned())),
                        ref fields => Err(format!("expected 2 tab-separated fields, found {}", fields.len())),
                    })
                    .map_err(|reason| Malformed { id, reason })
                    .and_then(|(en, tgt)| check_pair(id, en, tgt)))
                })))
            }
            BitextCorpus::Parallel { english, target } => {
                let mut en = LineReader::open(english)?;
                let mut tgt = LineReader::open(target)?;
                let (en_path, tgt_path) = (english.clone(), target.clone());
                let mut id = 0usize;
                let mut done = false;
                Ok(Box::new(std::iter::from_fn(move || {
                    if done {
                        return None;
                    }
                    let item = match (en.next(), tgt.next()) {
                        (None, None) => {
                            done = true;
                            return None;
                        }
                        (Some(_), None) | (None, Some(_)) => {
                            done = true;
                            Err(Error::Input(format!(
                                "{} and {} have different line counts (diverge at line {})",
                                en_path.display(),
                                tgt_path.display(),
                                id + 1
                            )))
                        }
                        (Some(a), Some(b)) => (|| {
                            let (a, b) = (a?, b?);
                            Ok(match (a, b) {
                                (Ok(a), Ok(b)) => {
                                    if a.contains('\t') || b.contains('\t') {
                                        Err(Malformed {
                                            id,
                                            reason: "text contains a tab".into(),
                                        })
                                    } else {
                                        check_pair(id, a, b)
                                    }
                                }
                                (Err(reason), _) | (_, Err(reason)) => Err(Malformed { id, reason }),
                            })
                        })(),
                    };
                    id += 1;
                    Some(item)
                })))
            }
        }
    }
}

fn check_pair(id: usize, source_en: String, target: String) -> CorpusItem {
    let malformed = |reason: &str| Malformed {
        id,
        reason: reason.to_owned(),
    };
    if source_en.trim().is_empty() || target.trim().is_empty() {
        return Err(malformed("empty side"));
    }
    if source_en.contains(MASK) || target.contains(MASK) {
        return Err(malformed("contains the reserved [MASK] token"));
    }
    Ok(SentencePair { id, source_en, target })
}

/// Yields one entry per line; invalid UTF-8 becomes an inner `Err` so the line
/// still counts.
pub(crate) struct LineReader {
    reader: BufReader<File>,
    path: PathBuf,
    buf: Vec<u8>,
}

impl LineReader {
    pub(crate) fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        Ok(LineReader {
            reader: BufReader::new(file),
            path: path.to_owned(),
            buf: Vec::new(),
        })
    }
}

impl Iterator for LineReader {
    type Item = Result<std::result::Result<String, String>>;

    fn next(&mut self) -> Option<Self::Item> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => None,
            Ok(_) => {
                if self.buf.last() == Some(&b'\n') {
                    self.buf.pop();
                    if self.buf.last() == Some(&b'\r') {
                        self.buf.pop();
                    }
                }
                Some(Ok(String::from_utf8(std::mem::take(&mut self.buf)).map_err(|_| "invalid UTF-8".to_owned())))
            }
            Err(e) => Some(Err(Error::io(format!("reading {}", self.path.display()), e))),
        }
    }
}
