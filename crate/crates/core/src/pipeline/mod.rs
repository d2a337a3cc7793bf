//! Corpus ingestion, generation, rule-based pair production and mixing.

mod config;
mod corpus;
mod filters;
mod generate;
mod mix;
mod rules;
mod stats;

pub use config::{BackendConfig, BackendKind, PipelineConfig, RetryPolicy, DEFAULT_BATCH_SIZE};
pub use corpus::{BitextCorpus, CorpusItem, Malformed};
pub use filters::{apply_filters, DropReason, FilterConfig, PairInProgress, Verdict};
pub use generate::{generate_dataset, generate_to_file, read_manifest, GenerateSettings};
pub use mix::{mix_datasets, mix_to_file, MixStats};
pub use rules::{rule_corrupt_file, rule_pairs, RuleStats};
pub use stats::{sidecar_path, GenStats, PartialManifest};
