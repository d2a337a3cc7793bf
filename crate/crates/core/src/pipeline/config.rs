use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::filters::FilterConfig;
use crate::error::{Error, Result};
use crate::noise::NoiseConfig;
use crate::postedit::PostEditConfig;
use crate::predict::{EchoBackend, LexiconBackend, PredictorBackend, RemoteBackend, SamplingConfig};
use crate::rulegen::RuleConfig;
use crate::text::LangProfile;

pub const DEFAULT_BATCH_SIZE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Remote,
    Lexicon,
    Echo,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    /// Base URL of a predictor server (`kind = "remote"`).
    pub url: Option<String>,
    /// `token TAB count` file (`kind = "lexicon"`).
    pub lexicon: Option<PathBuf>,
    /// `id TAB tokens` oracle file (`kind = "echo"`).
    pub oracle: Option<PathBuf>,
}

impl BackendConfig {
    pub fn build(&self, batch_size: usize) -> Result<Arc<dyn PredictorBackend>> {
        match self.kind {
            BackendKind::Remote => {
                let url = self
                    .url
                    .as_ref()
                    .ok_or_else(|| Error::config("backend.url is required for a remote backend"))?;
                Ok(Arc::new(RemoteBackend::new(url.clone()).with_batch_size(batch_size)))
            }
            BackendKind::Lexicon => {
                let path = self
                    .lexicon
                    .as_ref()
                    .ok_or_else(|| Error::config("backend.lexicon is required for a lexicon backend"))?;
                Ok(Arc::new(LexiconBackend::load(path)?))
            }
            BackendKind::Echo => {
                let path = self
                    .oracle
                    .as_ref()
                    .ok_or_else(|| Error::config("backend.oracle is required for an echo backend"))?;
                Ok(Arc::new(EchoBackend::load(path)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub initial_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 5,
            initial_backoff_ms: 100,
        }
    }
}

impl RetryPolicy {
    pub fn backoff(&self, attempt: u32) -> Duration {
        Duration::from_millis(self.initial_backoff_ms.saturating_mul(1u64 << attempt.min(20)))
    }
}

/// Everything `generate` and `rule-corrupt` read from the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub workers: usize,
    pub batch_size: usize,
    pub lang: LangProfile,
    pub noise: NoiseConfig,
    pub sampling: SamplingConfig,
    pub postedit: PostEditConfig,
    pub rule: RuleConfig,
    pub filters: FilterConfig,
    pub backend: BackendConfig,
    pub retry: RetryPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            workers: 1,
            batch_size: DEFAULT_BATCH_SIZE,
            lang: LangProfile::default(),
            noise: NoiseConfig::german(),
            sampling: SamplingConfig::default(),
            postedit: PostEditConfig::german(),
            rule: RuleConfig::default(),
            filters: FilterConfig::default(),
            backend: BackendConfig::default(),
            retry: RetryPolicy::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a TOML config. Relative backend paths resolve against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.backend.lexicon, &mut cfg.backend.oracle].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch_size must be at least 1"));
        }
        self.lang.validate()?;
        self.noise.validate()?;
        self.sampling.validate()?;
        self.postedit.validate(&self.lang)?;
        self.rule.validate(&self.lang)?;
        self.filters.validate()?;
        Ok(())
    }
}
