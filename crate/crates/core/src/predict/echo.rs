use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::wire::{RawPrediction, ScoredToken};
use super::{PredictionRequest, PredictorBackend};
use crate::error::{Error, Result};

type Oracle = HashMap<usize, String>;

/// Test backend that answers each mask with a preconfigured token at
/// probability 1.
///
/// Oracles are looked up by request id first and fall back to the default
/// oracle, if any.
#[derive(Debug, Clone, Default)]
pub struct EchoBackend {
    default: Option<Oracle>,
    by_id: HashMap<String, Oracle>,
}

impl EchoBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_default<I, S>(mut self, oracle: I) -> Self
    where
        I: IntoIterator<Item = (usize, S)>,
        S: Into<String>,
    {
        self.default = Some(oracle.into_iter().map(|(p, t)| (p, t.into())).collect());
        self
    }

    pub fn insert<I, S>(&mut self, id: impl Into<String>, oracle: I)
    where
        I: IntoIterator<Item = (usize, S)>,
        S: Into<String>,
    {
        self.by_id
            .insert(id.into(), oracle.into_iter().map(|(p, t)| (p, t.into())).collect());
    }

    /// Reads `id TAB space-separated tokens` lines; token `i` answers position `i`.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        let mut echo = EchoBackend::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let (id, tokens) = line.split_once('\t').ok_or_else(|| Error::Parse {
                path: path.to_owned(),
                line: n + 1,
                msg: "expected id<TAB>tokens".into(),
            })?;
            echo.insert(id, tokens.split_whitespace().enumerate());
        }
        Ok(echo)
    }

    fn oracle_for(&self, id: &str) -> Option<&Oracle> {
        self.by_id.get(id).or(self.default.as_ref())
    }
}

impl PredictorBackend for EchoBackend {
    fn predict_batch(&self, requests: &[PredictionRequest]) -> Result<Vec<Vec<RawPrediction>>> {
        requests
            .iter()
            .map(|req| {
                let oracle = self
                    .oracle_for(&req.id)
                    .ok_or_else(|| Error::protocol(format!("no oracle for request {}", req.id)))?;
                req.mask_positions()
                    .into_iter()
                    .map(|position| {
                        let token = oracle.get(&position).ok_or_else(|| {
                            Error::protocol(format!("no oracle token for request {} position {position}", req.id))
                        })?;
                        Ok(RawPrediction {
                            position,
                            candidates: vec![ScoredToken::new(token.clone(), 0.0)],
                        })
                    })
                    .collect()
            })
            .collect()
    }
}
