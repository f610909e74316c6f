use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use super::manifest::{MANIFEST_FILE, ManifestEntry, OutputFiles, PartnerRef, PatchCoords, read_manifest, replay_entry};
use super::{Dataset, RunConfig, create_dir, write_atomic};
use crate::augment::{self, Dihedral};
use crate::error::{Error, Result};
use crate::moa::apply_moa;
use crate::tensor::{Image, LossMask, Rng, derive_item_seed};

/// Sub-stream index for partner selection within an item.
const PARTNER_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentSummary {
    pub samples: usize,
    /// Sample count per method name, `none` included.
    pub methods: BTreeMap<String, usize>,
}

fn uniform_corner(rng: &mut Rng, dims: (usize, usize), size: usize) -> (usize, usize) {
    (rng.below(dims.0 - size + 1), rng.below(dims.1 - size + 1))
}

fn process(dataset: &Dataset, cfg: &RunConfig, out: &Path, index: u64) -> Result<ManifestEntry> {
    let spi = cfg.samples_per_image as u64;
    let source = (index / spi) as usize;
    let size = cfg.patch_size;
    let item_seed = derive_item_seed(cfg.seed, index);
    let mut rng = Rng::new(item_seed);

    let (x, y) = uniform_corner(&mut rng, dataset.lr_dims(source), size);
    let pair = dataset.aligned_patch(source, x, y, size)?;
    let transform = Dihedral::sample(&mut rng);
    let pair = augment::flip_rotate_with(&pair, transform).into_pair(pair.scale, pair.source_id)?;

    let mut partner_ref = None;
    let provider = || {
        let mut prng = Rng::new(derive_item_seed(item_seed, PARTNER_STREAM));
        let other = prng.below(dataset.len());
        let (px, py) = uniform_corner(&mut prng, dataset.lr_dims(other), size);
        partner_ref = Some(PartnerRef {
            source_id: dataset.items[other].0.clone(),
            x: px,
            y: py,
        });
        dataset.aligned_patch(other, px, py, size)
    };
    let sample = apply_moa(&pair, provider, &cfg.policy, &mut rng)?;

    let stem = format!("{index:06}");
    let files = OutputFiles {
        input: format!("input/{stem}.png"),
        target: format!("target/{stem}.png"),
        mask: format!("mask/{stem}.png"),
    };
    sample.input.save_png(out.join(&files.input))?;
    sample.target.save_png(out.join(&files.target))?;
    sample.loss_mask.save_png(out.join(&files.mask))?;

    Ok(ManifestEntry {
        index,
        source_id: dataset.items[source].0.clone(),
        patch: PatchCoords { x, y, size },
        scale: dataset.scale,
        item_seed,
        transform,
        partner: partner_ref,
        record: sample.record,
        files,
    })
}

/// Extracts `samples_per_image` patches from every image of the paired
/// dataset, applies flip/rotate then MoA, and writes input/target/mask PNGs
/// plus `manifest.jsonl` in index order. Output bytes do not depend on the
/// worker count.
pub fn cmd_augment(cfg: &RunConfig) -> Result<AugmentSummary> {
    cfg.validate()?;
    let (input_dir, out) = cfg.dirs()?;
    let dataset = Dataset::load(&input_dir, cfg.task.scale())?;
    for (id, lr, _) in &dataset.items {
        if cfg.patch_size > lr.width().min(lr.height()) {
            return Err(Error::Config(format!(
                "patch_size {} x scale {} exceeds the smaller side of `{id}` ({}x{})",
                cfg.patch_size,
                dataset.scale,
                lr.width() * dataset.scale,
                lr.height() * dataset.scale
            )));
        }
    }
    for sub in ["input", "target", "mask"] {
        create_dir(&out.join(sub))?;
    }
    write_atomic(&out.join("config.txt"), cfg.to_text().as_bytes())?;

    let total = (dataset.len() * cfg.samples_per_image) as u64;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let entries: Vec<ManifestEntry> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| process(&dataset, cfg, &out, i))
            .collect::<Result<_>>()
    })?;

    let mut manifest = String::new();
    let mut methods = BTreeMap::new();
    for entry in &entries {
        manifest.push_str(&serde_json::to_string(entry)?);
        manifest.push('\n');
        *methods.entry(entry.record.method_name().to_string()).or_insert(0) += 1;
    }
    write_atomic(&out.join(MANIFEST_FILE), manifest.as_bytes())?;
    log::info!("wrote {} samples to {}", entries.len(), out.display());
    Ok(AugmentSummary {
        samples: entries.len(),
        methods,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    pub checked: usize,
    /// Indices whose stored files differ from the replayed sample.
    pub mismatched: Vec<u64>,
}

/// Replays every manifest entry of a finished run against the source
/// dataset and compares with the stored 8-bit patches and masks.
pub fn verify_run(cfg: &RunConfig) -> Result<VerifySummary> {
    let (input_dir, out) = cfg.dirs()?;
    let dataset = Dataset::load(&input_dir, cfg.task.scale())?;
    let entries = read_manifest(&out.join(MANIFEST_FILE))?;
    let results: Vec<(u64, bool)> = entries
        .par_iter()
        .map(|entry| {
            let sample = replay_entry(&dataset, entry)?;
            let same = Image::load_png(out.join(&entry.files.input))? == sample.input.quantized()
                && Image::load_png(out.join(&entry.files.target))? == sample.target.quantized()
                && LossMask::load_png(out.join(&entry.files.mask))? == sample.loss_mask;
            Ok((entry.index, same))
        })
        .collect::<Result<_>>()?;
    Ok(VerifySummary {
        checked: results.len(),
        mismatched: results.into_iter().filter(|(_, ok)| !ok).map(|(i, _)| i).collect(),
    })
}
