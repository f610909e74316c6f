use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{file_name, file_stem, list_pngs};
use crate::degrade::DegradeSpec;
use crate::error::{Error, Result};
use crate::resample::upsample_bicubic;
use crate::tensor::{AlignedPair, Image};

pub const DATASET_FILE: &str = "dataset.json";

/// `dataset.json` written by `synth`; paths are relative to the dataset root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub spec: DegradeSpec,
    pub seed: u64,
    pub items: Vec<DatasetItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetItem {
    pub id: String,
    pub input: String,
    pub target: String,
    /// Compressed bitstream kept next to the decoded input (JPEG task only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<String>,
    pub width: usize,
    pub height: usize,
}

impl DatasetDescriptor {
    pub fn load(root: &Path) -> Result<Self> {
        let path = root.join(DATASET_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// A paired dataset held in memory, ordered by id.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub scale: usize,
    pub items: Vec<(String, Image, Image)>,
}

impl Dataset {
    /// Loads `root` through its descriptor when present, otherwise pairs
    /// `input/*.png` with `target/*.png` by file name.
    pub fn load(root: &Path, scale: usize) -> Result<Self> {
        let mut items = Vec::new();
        if root.join(DATASET_FILE).is_file() {
            let desc = DatasetDescriptor::load(root)?;
            if desc.spec.scale() != scale {
                return Err(Error::Config(format!(
                    "dataset was synthesized as {} but the run uses scale {scale}",
                    desc.spec
                )));
            }
            for item in desc.items {
                let lr = Image::load_png(root.join(&item.input))?;
                let hr = Image::load_png(root.join(&item.target))?;
                items.push((item.id, lr, hr));
            }
        } else {
            let inputs = list_pngs(&root.join("input"))?;
            let targets = list_pngs(&root.join("target"))?;
            let names = |v: &[PathBuf]| v.iter().map(|p| file_name(p)).collect::<Vec<_>>();
            if names(&inputs) != names(&targets) {
                let (a, b) = (names(&inputs), names(&targets));
                let mut odd: Vec<String> = a.iter().filter(|n| !b.contains(n)).cloned().collect();
                odd.extend(b.iter().filter(|n| !a.contains(n)).cloned());
                return Err(Error::NameMismatch(odd));
            }
            for (i, t) in inputs.iter().zip(&targets) {
                items.push((file_stem(i), Image::load_png(i)?, Image::load_png(t)?));
            }
        }
        items.sort_by(|a, b| a.0.cmp(&b.0));
        if items.is_empty() {
            return Err(Error::EmptyDataset(root.display().to_string()));
        }
        for (id, lr, hr) in &items {
            if lr.width() * scale != hr.width() || lr.height() * scale != hr.height() || lr.channels() != hr.channels() {
                return Err(Error::DimensionMismatch(format!(
                    "{id}: input {} is not target {} / {scale}",
                    lr.shape_str(),
                    hr.shape_str()
                )));
            }
        }
        Ok(Self { scale, items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|(i, _, _)| i == id)
    }

    /// LR-grid dimensions of item `index`.
    pub fn lr_dims(&self, index: usize) -> (usize, usize) {
        let lr = &self.items[index].1;
        (lr.width(), lr.height())
    }

    /// Crops a `size × size` LR patch at `(x, y)` and the matching HR patch,
    /// then upsamples the LR patch onto the HR grid.
    pub fn aligned_patch(&self, index: usize, x: usize, y: usize, size: usize) -> Result<AlignedPair> {
        let (id, lr, hr) = &self.items[index];
        let s = self.scale;
        let lr_patch = lr.crop(x, y, size, size)?;
        let hr_patch = hr.crop(x * s, y * s, size * s, size * s)?;
        AlignedPair::new(upsample_bicubic(&lr_patch, s)?, hr_patch, s, id.clone())
    }
}
