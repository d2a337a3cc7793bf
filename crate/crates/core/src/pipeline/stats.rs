use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::filters::DropReason;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GenStats {
    pub records_read: usize,
    pub emitted: usize,
    /// Includes malformed records.
    pub filtered: usize,
    pub filtered_by_reason: BTreeMap<DropReason, usize>,
    pub noise_ops: BTreeMap<String, usize>,
    pub postedit_ops: BTreeMap<String, usize>,
    /// Masks introduced by the noiser across all records that reached it.
    pub masks_total: usize,
    /// Masks that ended up replaced in an emitted pair.
    pub masks_filled: usize,
    pub mask_fill_rate: f64,
    pub predictor_calls: usize,
    pub backend_retries: usize,
    pub elapsed_secs: f64,
}

impl GenStats {
    pub(crate) fn drop(&mut self, reason: DropReason) {
        self.filtered += 1;
        *self.filtered_by_reason.entry(reason).or_default() += 1;
    }

    pub(crate) fn finish(&mut self) {
        self.mask_fill_rate = if self.masks_total == 0 {
            1.0
        } else {
            self.masks_filled as f64 / self.masks_total as f64
        };
    }

    /// `read == emitted + filtered`.
    pub fn is_balanced(&self) -> bool {
        self.records_read == self.emitted + self.filtered
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_json(self, path)
    }
}

/// Written next to a partial output when generation aborts.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct PartialManifest {
    pub last_completed_record_id: Option<usize>,
    pub records_written: usize,
    pub error: String,
}

pub(crate) fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("stats serialize");
    std::fs::write(path, text + "\n").map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn sidecar_path(output: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    output.with_file_name(name)
}
