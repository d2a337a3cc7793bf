//! The NAT generation pipeline.
//!
//! Records flow reader → worker pool → reorder → writer. The reader fills a
//! bounded window, the window is cut into predictor batches that workers
//! process in parallel, and results are written back in record order. Every
//! random decision uses a stream derived from `(seed, record_id, stage)`, so
//! neither the worker count nor the batch layout affects the output.

use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;

use super::config::{PipelineConfig, RetryPolicy};
use super::corpus::{BitextCorpus, CorpusItem};
use super::filters::{apply_filters, DropReason, FilterConfig, PairInProgress, Verdict};
use super::stats::{sidecar_path, write_json, GenStats, PartialManifest};
use crate::error::{Error, Result};
use crate::noise::{apply_token_noise, CorruptedSeq, NoiseConfig, NoiseOp};
use crate::pair::{write_pair, ErroneousPair, Provenance};
use crate::postedit::{apply_char_noise_traced, CharOp, PostEditConfig};
use crate::predict::{infill, predict_masks_batch, sample_replacements, MaskPrediction, PredictionRequest, PredictorBackend, SamplingConfig};
use crate::rng::{derive_record_rng, stage};
use crate::text::{detokenize, tokenize, LangProfile, SentencePair, TokenSeq, MASK};

/// Settings for one generation run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerateSettings {
    pub noise: NoiseConfig,
    pub sampling: SamplingConfig,
    pub postedit: PostEditConfig,
    pub profile: LangProfile,
    pub filters: FilterConfig,
    pub seed: u64,
    pub workers: usize,
    pub batch_size: usize,
    pub retry: RetryPolicy,
    /// Skip records up to and including this id (resuming a partial run).
    pub resume_after: Option<usize>,
}

impl GenerateSettings {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        GenerateSettings {
            noise: cfg.noise,
            sampling: cfg.sampling,
            postedit: cfg.postedit,
            profile: cfg.lang.clone(),
            filters: cfg.filters,
            seed: cfg.seed,
            workers: cfg.workers,
            batch_size: cfg.batch_size,
            retry: cfg.retry,
            resume_after: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.workers == 0 || self.batch_size == 0 {
            return Err(Error::config("workers and batch_size must be at least 1"));
        }
        self.profile.validate()?;
        self.noise.validate()?;
        self.sampling.validate()?;
        self.postedit.validate(&self.profile)?;
        self.filters.validate()
    }

    fn window(&self) -> usize {
        self.workers * self.batch_size * 4
    }
}

impl Default for GenerateSettings {
    fn default() -> Self {
        Self::from_config(&PipelineConfig::default())
    }
}

#[derive(Debug, Default)]
struct RecordTally {
    noise_ops: [usize; 4],
    char_ops: [usize; 5],
    masks: usize,
    filled: usize,
}

enum Outcome {
    Emitted(ErroneousPair),
    Dropped(DropReason),
}

struct RecordResult {
    id: usize,
    outcome: Outcome,
    tally: RecordTally,
}

struct BatchResult {
    records: Vec<RecordResult>,
    retries: usize,
    calls: usize,
}

/// A record after noising, waiting for predictions.
struct Noised {
    pair: SentencePair,
    target: TokenSeq,
    corrupted: CorruptedSeq,
}

enum Staged {
    Done(RecordResult),
    Noised(Noised),
}

fn stage_record(item: CorpusItem, s: &GenerateSettings) -> Result<Staged> {
    let pair = match item {
        Ok(p) => p,
        Err(m) => {
            warn!("record {}: {}", m.id, m.reason);
            return Ok(Staged::Done(dropped(m.id, DropReason::Malformed, RecordTally::default())));
        }
    };
    let target = match tokenize(&pair.target, &s.profile) {
        Ok(t) => t,
        Err(_) => return Ok(Staged::Done(dropped(pair.id, DropReason::Malformed, RecordTally::default()))),
    };
    let mut progress = PairInProgress {
        source_en_tokens: pair.source_en.split_whitespace().count(),
        target_tokens: target.len(),
        mask_count: None,
    };
    if let Verdict::Drop(reason) = apply_filters(&progress, &s.filters) {
        return Ok(Staged::Done(dropped(pair.id, reason, RecordTally::default())));
    }

    let mut rng = derive_record_rng(s.seed, pair.id as u64, stage::NOISER);
    let corrupted = apply_token_noise(&target, &s.noise, &mut rng)?;
    progress.mask_count = Some(corrupted.mask_positions.len());
    if let Verdict::Drop(reason) = apply_filters(&progress, &s.filters) {
        let mut tally = RecordTally::default();
        tally_noise(&mut tally, &corrupted);
        return Ok(Staged::Done(dropped(pair.id, reason, tally)));
    }
    Ok(Staged::Noised(Noised { pair, target, corrupted }))
}

fn dropped(id: usize, reason: DropReason, tally: RecordTally) -> RecordResult {
    RecordResult {
        id,
        outcome: Outcome::Dropped(reason),
        tally,
    }
}

fn tally_noise(tally: &mut RecordTally, c: &CorruptedSeq) {
    for (slot, op) in NoiseOp::ALL.iter().enumerate() {
        tally.noise_ops[slot] += c.count(*op);
    }
    tally.masks += c.mask_positions.len();
}

fn finish_record(n: Noised, preds: Option<Vec<MaskPrediction>>, s: &GenerateSettings) -> Result<RecordResult> {
    let id = n.pair.id;
    let mut tally = RecordTally::default();
    tally_noise(&mut tally, &n.corrupted);

    let filled = match preds {
        Some(preds) => {
            let mut rng = derive_record_rng(s.seed, id as u64, stage::SAMPLER);
            let samples = sample_replacements(&preds, &s.sampling, &mut rng)?;
            infill(&n.corrupted, &samples)?
        }
        None => TokenSeq::new(n.corrupted.tokens.clone())?,
    };
    let text = detokenize(filled.tokens(), &s.profile);
    let mut rng = derive_record_rng(s.seed, id as u64, stage::POSTEDIT);
    let noised = apply_char_noise_traced(&text, &s.postedit, &s.profile, &mut rng)?;
    for (slot, op) in CharOp::ALL.iter().enumerate() {
        tally.char_ops[slot] += noised.count(*op);
    }

    let pair = ErroneousPair {
        source: noised.text,
        target: detokenize(n.target.tokens(), &s.profile),
        record_id: id,
        provenance: Provenance::Nat,
    };
    if pair.validate().is_err() || tokenize(&pair.source, &s.profile).map_or(true, |t| t.contains_mask()) {
        return Ok(dropped(id, DropReason::InvalidOutput, tally));
    }
    tally.filled = tally.masks;
    Ok(RecordResult {
        id,
        outcome: Outcome::Emitted(pair),
        tally,
    })
}

fn predict_with_retry<B: PredictorBackend + ?Sized>(
    requests: &[PredictionRequest],
    backend: &B,
    retry: &RetryPolicy,
    retries: &mut usize,
) -> Result<Vec<Vec<MaskPrediction>>> {
    let mut attempt = 0;
    loop {
        match predict_masks_batch(requests, backend) {
            Ok(p) => return Ok(p),
            Err(e) if e.is_retryable() && attempt < retry.max_retries => {
                let wait = retry.backoff(attempt);
                warn!("predictor unavailable ({e}); retry {} in {wait:?}", attempt + 1);
                std::thread::sleep(wait);
                attempt += 1;
                *retries += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn process_batch<B: PredictorBackend + ?Sized>(items: Vec<CorpusItem>, s: &GenerateSettings, backend: &B) -> (BatchResult, Option<Error>) {
    let mut staged = Vec::with_capacity(items.len());
    for item in items {
        match stage_record(item, s) {
            Ok(st) => staged.push(st),
            Err(e) => return (empty_batch(), Some(e)),
        }
    }

    let requests: Vec<PredictionRequest> = staged
        .iter()
        .filter_map(|st| match st {
            Staged::Noised(n) if !n.corrupted.mask_positions.is_empty() => Some(
                PredictionRequest::new(n.pair.id.to_string(), n.pair.source_en.clone(), n.corrupted.tokens.clone(), s.sampling.top_k)
                    .expect("tokens contain a mask"),
            ),
            _ => None,
        })
        .collect();

    let mut retries = 0;
    let mut calls = 0;
    let mut predictions = if requests.is_empty() {
        Vec::new()
    } else {
        calls += 1;
        match predict_with_retry(&requests, backend, &s.retry, &mut retries) {
            Ok(p) => p,
            Err(e) => {
                let mut b = empty_batch();
                b.retries = retries;
                return (b, Some(e));
            }
        }
    }
    .into_iter();

    let mut records = Vec::with_capacity(staged.len());
    for st in staged {
        let result = match st {
            Staged::Done(r) => Ok(r),
            Staged::Noised(n) => {
                let preds = if n.corrupted.mask_positions.is_empty() {
                    None
                } else {
                    predictions.next()
                };
                finish_record(n, preds, s)
            }
        };
        match result {
            Ok(r) => records.push(r),
            Err(e) => return (BatchResult { records: Vec::new(), retries, calls }, Some(e)),
        }
    }
    (BatchResult { records, retries, calls }, None)
}

fn empty_batch() -> BatchResult {
    BatchResult {
        records: Vec::new(),
        retries: 0,
        calls: 0,
    }
}

/// Runs the pipeline over `corpus`, writing pairs to `out` in record order.
///
/// On a fatal error the records already written stay in `out` and the
/// returned error is [`Error::BackendExhausted`] (or the underlying error)
/// carrying the last completed record id.
pub fn generate_dataset<B, W>(corpus: &BitextCorpus, settings: &GenerateSettings, backend: &B, out: &mut W) -> Result<GenStats>
where
    B: PredictorBackend + ?Sized,
    W: Write,
{
    let mut stats = GenStats::default();
    let r = generate_into(corpus, settings, backend, out, &mut stats);
    stats.finish();
    r.map(|()| stats)
}

pub(crate) fn generate_into<B, W>(
    corpus: &BitextCorpus,
    settings: &GenerateSettings,
    backend: &B,
    out: &mut W,
    stats: &mut GenStats,
) -> Result<()>
where
    B: PredictorBackend + ?Sized,
    W: Write,
{
    settings.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;

    let mut records = corpus.records()?;
    let mut last_completed: Option<usize> = settings.resume_after;
    let window = settings.window();

    loop {
        let mut batch_items: Vec<CorpusItem> = Vec::with_capacity(window);
        for item in records.by_ref() {
            let item = item?;
            let id = match &item {
                Ok(p) => p.id,
                Err(m) => m.id,
            };
            if settings.resume_after.is_some_and(|r| id <= r) {
                continue;
            }
            batch_items.push(item);
            if batch_items.len() == window {
                break;
            }
        }
        if batch_items.is_empty() {
            break;
        }

        let mut batches: Vec<Vec<CorpusItem>> = Vec::new();
        let mut iter = batch_items.into_iter().peekable();
        while iter.peek().is_some() {
            batches.push(iter.by_ref().take(settings.batch_size).collect());
        }
        let results: Vec<(BatchResult, Option<Error>)> =
            pool.install(|| batches.into_par_iter().map(|b| process_batch(b, settings, backend)).collect());

        for (batch, err) in results {
            stats.backend_retries += batch.retries;
            stats.predictor_calls += batch.calls;
            if let Some(e) = err {
                out.flush().map_err(|e| Error::io("flushing output", e))?;
                stats.elapsed_secs = started.elapsed().as_secs_f64();
                return Err(if e.is_retryable() {
                    Error::BackendExhausted {
                        last_completed,
                        source: Box::new(e),
                    }
                } else {
                    e
                });
            }
            for r in batch.records {
                stats.records_read += 1;
                for (slot, op) in NoiseOp::ALL.iter().enumerate() {
                    *stats.noise_ops.entry(format!("{op:?}").to_lowercase()).or_default() += r.tally.noise_ops[slot];
                }
                for (slot, op) in CharOp::ALL.iter().enumerate() {
                    *stats.postedit_ops.entry(format!("{op:?}").to_lowercase()).or_default() += r.tally.char_ops[slot];
                }
                stats.masks_total += r.tally.masks;
                stats.masks_filled += r.tally.filled;
                match r.outcome {
                    Outcome::Emitted(pair) => {
                        debug_assert!(!pair.source.contains(MASK));
                        write_pair(out, &pair).map_err(|e| Error::io("writing output", e))?;
                        stats.emitted += 1;
                    }
                    Outcome::Dropped(reason) => stats.drop(reason),
                }
                last_completed = Some(r.id);
            }
        }
    }
    out.flush().map_err(|e| Error::io("flushing output", e))?;
    stats.elapsed_secs = started.elapsed().as_secs_f64();
    info!(
        "generated {} pairs from {} records ({} filtered) in {:.1}s",
        stats.emitted, stats.records_read, stats.filtered, stats.elapsed_secs
    );
    Ok(())
}

/// File-level wrapper: writes the pair TSV, a `.stats.json` sidecar, and on
/// failure a `.manifest.json` recording the last completed record id.
/// With `resume_after` set the output is appended to.
pub fn generate_to_file<B: PredictorBackend + ?Sized>(
    corpus: &BitextCorpus,
    settings: &GenerateSettings,
    backend: &B,
    output: &Path,
) -> Result<GenStats> {
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(settings.resume_after.is_some())
        .truncate(settings.resume_after.is_none())
        .open(output)
        .map_err(|e| Error::io(format!("creating {}", output.display()), e))?;
    let mut writer = BufWriter::new(file);
    let mut stats = GenStats::default();
    let result = generate_into(corpus, settings, backend, &mut writer, &mut stats);
    drop(writer);
    stats.finish();
    stats.write_json(&sidecar_path(output, ".stats.json"))?;
    let manifest_path = sidecar_path(output, ".manifest.json");
    match result {
        Ok(()) => {
            if manifest_path.exists() {
                std::fs::remove_file(&manifest_path).map_err(|e| Error::io("removing stale manifest", e))?;
            }
            Ok(stats)
        }
        Err(e) => {
            let last_completed = match &e {
                Error::BackendExhausted { last_completed, .. } => *last_completed,
                _ => None,
            };
            let manifest = PartialManifest {
                last_completed_record_id: last_completed,
                records_written: stats.emitted,
                error: e.to_string(),
            };
            write_json(&manifest, &manifest_path)?;
            Err(e)
        }
    }
}

pub fn read_manifest(path: &Path) -> Result<PartialManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
