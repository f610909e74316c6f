use std::path::Path;

use super::dataset::{DATASET_FILE, DatasetDescriptor, DatasetItem};
use super::{create_dir, file_stem, list_pngs, write_atomic};
use crate::degrade::{self, DegradeSpec};
use crate::error::Result;
use crate::tensor::{Image, Rng, derive_item_seed};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SynthSummary {
    pub written: Vec<String>,
    /// `(file name, reason)` for every image that was not converted.
    pub skipped: Vec<(String, String)>,
}

/// Degrades every PNG in `hr_dir` and writes `input/`, `target/` and
/// `dataset.json` under `out_dir`. Noise for the `i`-th file (sorted by
/// name) is seeded with `derive_item_seed(seed, i)`.
pub fn cmd_synth(hr_dir: &Path, out_dir: &Path, spec: DegradeSpec, seed: u64) -> Result<SynthSummary> {
    spec.validate()?;
    let files = list_pngs(hr_dir)?;
    create_dir(&out_dir.join("input"))?;
    create_dir(&out_dir.join("target"))?;
    let mut summary = SynthSummary::default();
    let mut items = Vec::new();

    for (index, path) in files.iter().enumerate() {
        let name = super::file_name(path);
        let id = file_stem(path);
        let hr = match Image::load_png(path) {
            Ok(img) => img,
            Err(e) => {
                log::warn!("skipping {name}: {e}");
                summary.skipped.push((name, e.to_string()));
                continue;
            }
        };
        let mut raw = None;
        let lr = match spec {
            DegradeSpec::Sr { scale } => degrade::make_sr_pair(&hr, scale).map(|(lr, _)| lr),
            DegradeSpec::Gaussian { sigma } => {
                let mut rng = Rng::new(derive_item_seed(seed, index as u64));
                degrade::add_gaussian_noise(&hr, sigma, &mut rng)
            }
            DegradeSpec::Jpeg { quality } => degrade::jpeg_encode(&hr, quality).and_then(|bytes| {
                let decoded = degrade::jpeg_decode(&bytes)?;
                raw = Some(bytes);
                Ok(decoded)
            }),
        };
        let lr = match lr {
            Ok(img) => img,
            Err(e) => {
                log::warn!("skipping {name}: {e}");
                summary.skipped.push((name, e.to_string()));
                continue;
            }
        };

        let input = format!("input/{id}.png");
        let target = format!("target/{id}.png");
        lr.save_png(out_dir.join(&input))?;
        hr.save_png(out_dir.join(&target))?;
        let raw = match raw {
            Some(bytes) => {
                let rel = format!("input/{id}.jpg");
                write_atomic(&out_dir.join(&rel), &bytes)?;
                Some(rel)
            }
            None => None,
        };
        items.push(DatasetItem {
            id,
            input,
            target,
            raw,
            width: hr.width(),
            height: hr.height(),
        });
        summary.written.push(name);
    }

    let descriptor = DatasetDescriptor { spec, seed, items };
    let json = serde_json::to_string_pretty(&descriptor)?;
    write_atomic(&out_dir.join(DATASET_FILE), json.as_bytes())?;
    Ok(summary)
}
