//! Synthetic grammatical error correction data.
//!
//! Clean bitext goes through token-level masking noise, a masked-infill
//! predictor fills the holes conditioned on the English source, and light
//! character noise is applied to the result. The crate also has a rule-based
//! corruptor for comparison, a Max-Match (M2) scorer and an edit-type
//! classifier for looking at the error distribution of a pair set.
//!
//! Every random decision is drawn from a per-record stream keyed by
//! `(seed, record id, stage)`, so output does not depend on the worker count.

pub mod error;
pub mod errortypes;
pub mod m2;
pub mod noise;
pub mod pair;
pub mod pipeline;
pub mod postedit;
pub mod predict;
pub mod rng;
pub mod rulegen;
pub mod text;

pub use error::{Error, Result};
pub use noise::{apply_token_noise, CorruptedSeq, NoiseConfig, NoiseOp};
pub use pair::{ErroneousPair, Provenance};
pub use postedit::{apply_char_noise, PostEditConfig};
pub use predict::{LexiconBackend, PredictorBackend, RemoteBackend, SamplingConfig, StubServer};
pub use rng::{derive_record_rng, RngStream};
pub use text::{detokenize, tokenize, LangProfile, SentencePair, TokenMode, TokenSeq, MASK};
