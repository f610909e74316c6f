use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::augment::{self, AugRecord, AugmentedSample, Dihedral};
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// Top-left corner and side of a patch on the LR grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchCoords {
    pub x: usize,
    pub y: usize,
    pub size: usize,
}

/// Partner patch pulled by a two-sample method (never flipped or rotated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartnerRef {
    pub source_id: String,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFiles {
    pub input: String,
    pub target: String,
    pub mask: String,
}

/// One line of `manifest.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: u64,
    pub source_id: String,
    pub patch: PatchCoords,
    pub scale: usize,
    pub item_seed: u64,
    /// Always-on flip/rotation applied before the MoA stage.
    pub transform: Dihedral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<PartnerRef>,
    pub record: AugRecord,
    pub files: OutputFiles,
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if !line.trim().is_empty() {
            entries.push(serde_json::from_str(&line)?);
        }
    }
    Ok(entries)
}

fn lookup(dataset: &Dataset, id: &str) -> Result<usize> {
    dataset
        .position(id)
        .ok_or_else(|| Error::EmptyDataset(format!("source `{id}` not in dataset")))
}

/// Rebuilds a sample from its manifest entry and the source dataset alone.
pub fn replay_entry(dataset: &Dataset, entry: &ManifestEntry) -> Result<AugmentedSample> {
    let source = lookup(dataset, &entry.source_id)?;
    let p = entry.patch;
    let pair = dataset.aligned_patch(source, p.x, p.y, p.size)?;
    let pair = augment::flip_rotate_with(&pair, entry.transform).into_pair(pair.scale, pair.source_id)?;
    let partner = match &entry.partner {
        Some(r) => Some(dataset.aligned_patch(lookup(dataset, &r.source_id)?, r.x, r.y, p.size)?),
        None => None,
    };
    augment::replay(&entry.record, &pair, partner.as_ref())
}
