//! On-disk workflows: dataset synthesis, augmentation runs with replayable
//! manifests, metric evaluation and demo panels.

mod augment;
mod config;
mod dataset;
mod demo;
mod eval;
mod manifest;
mod synth;

use std::fs;
use std::path::{Path, PathBuf};

pub use augment::{AugmentSummary, VerifySummary, cmd_augment, verify_run};
pub use config::{RunConfig, parse_kv};
pub use dataset::{DATASET_FILE, Dataset, DatasetDescriptor, DatasetItem};
pub use demo::{cmd_demo, render_panel};
pub use eval::{EvalEntry, EvalReport, cmd_eval};
pub use manifest::{MANIFEST_FILE, ManifestEntry, OutputFiles, PartnerRef, PatchCoords, read_manifest, replay_entry};
pub use synth::{SynthSummary, cmd_synth};

use crate::error::{Error, Result};

/// Writes `bytes` to a sibling temp file and renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// PNG files directly inside `dir`, sorted by file name.
pub fn list_pngs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("png"))
        })
        .collect();
    files.sort();
    Ok(files)
}

pub(crate) fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}
