use std::path::Path;

use crate::augment::{AugmentedSample, Dihedral};
use crate::error::{Error, Result};
use crate::metrics::residual_map;
use crate::moa::{Method, apply_method};
use crate::resample::align_pair;
use crate::tensor::{AlignedPair, Image, Rng};

fn hstack(tiles: &[&Image]) -> Image {
    let (h, c) = (tiles[0].height(), tiles[0].channels());
    let width: usize = tiles.iter().map(|t| t.width()).sum();
    let mut data = Vec::with_capacity(width * h * c);
    for y in 0..h {
        for t in tiles {
            let start = t.index(0, y, 0);
            data.extend_from_slice(&t.data()[start..start + t.width() * c]);
        }
    }
    Image::from_clamped(width, h, c, data)
}

/// Panel `HR | aligned LR | augmented input | |augmented input − target|`.
///
/// `method = None` shows the pair unaugmented. Two-sample methods use the
/// pair rotated by 180° as partner.
pub fn render_panel(pair: &AlignedPair, method: Option<Method>, seed: u64) -> Result<(Image, AugmentedSample)> {
    let sample = match method {
        None => AugmentedSample::passthrough(pair),
        Some(m) => {
            let partner = || {
                AlignedPair::new(
                    Dihedral::Rot180.apply(&pair.input),
                    Dihedral::Rot180.apply(&pair.target),
                    pair.scale,
                    pair.source_id.clone(),
                )
            };
            apply_method(m, &m.default_alpha(), pair, partner, &mut Rng::new(seed))?
        }
    };
    let residual = residual_map(&sample.input, &sample.target)?;
    let panel = hstack(&[&pair.target, &pair.input, &sample.input, &residual]);
    Ok((panel, sample))
}

/// Loads an LR/HR pair, renders the panel and saves it as PNG. `method`
/// is a pool method name or `none`.
pub fn cmd_demo(lr_path: &Path, hr_path: &Path, method: &str, seed: u64, out: &Path) -> Result<Image> {
    let method = match method {
        "none" => None,
        name => Some(name.parse::<Method>()?),
    };
    let lr = Image::load_png(lr_path)?;
    let hr = Image::load_png(hr_path)?;
    let scale = hr.width() / lr.width().max(1);
    if scale == 0 || lr.width() * scale != hr.width() || lr.height() * scale != hr.height() {
        return Err(Error::DimensionMismatch(format!(
            "hr {} is not an integer multiple of lr {}",
            hr.shape_str(),
            lr.shape_str()
        )));
    }
    let pair = align_pair(&lr, &hr, scale, super::file_stem(hr_path))?;
    let (panel, _) = render_panel(&pair, method, seed)?;
    panel.save_png(out)?;
    Ok(panel)
}
