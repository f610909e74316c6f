//! Pixel-domain augmentations for aligned pairs.
//!
//! Every random operator draws its parameters, records them in an
//! [`AugRecord`], then delegates to a deterministic `*_with` variant. Feeding a
//! record back through [`replay`] reproduces the sample bit for bit.

mod dihedral;
mod ops;
mod rect;

use serde::{Deserialize, Serialize};

pub use dihedral::Dihedral;
pub use ops::*;
pub use rect::{LAMBDA_VARIANCE, RectMask, sample_cutmix_rect};

use crate::error::{Error, Result};
use crate::tensor::{AlignedPair, Image, LossMask};

/// Which image CutBlur pastes into the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutblurDirection {
    /// HR pixels inside the rectangle, upsampled LR elsewhere.
    HrToLr,
    /// Upsampled LR pixels inside the rectangle, HR elsewhere.
    LrToHr,
}

/// Method name plus every sampled parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum AugRecord {
    None,
    Cutblur {
        rect: RectMask,
        direction: CutblurDirection,
    },
    Cutout {
        ratio: f64,
        /// Row-major indices of the erased pixels.
        dropped: Vec<usize>,
    },
    Cutmix {
        rect: RectMask,
    },
    Mixup {
        lambda: f64,
    },
    Cutmixup {
        lambda: f64,
        rect: RectMask,
    },
    RgbPermute {
        permutation: [usize; 3],
    },
    Blend {
        ratio: f64,
        color: [f64; 3],
    },
    FlipRotate {
        transform: Dihedral,
    },
}

impl AugRecord {
    pub fn method_name(&self) -> &'static str {
        match self {
            AugRecord::None => "none",
            AugRecord::Cutblur { .. } => "cutblur",
            AugRecord::Cutout { .. } => "cutout",
            AugRecord::Cutmix { .. } => "cutmix",
            AugRecord::Mixup { .. } => "mixup",
            AugRecord::Cutmixup { .. } => "cutmixup",
            AugRecord::RgbPermute { .. } => "rgb_permute",
            AugRecord::Blend { .. } => "blend",
            AugRecord::FlipRotate { .. } => "flip_rotate",
        }
    }

    pub fn needs_partner(&self) -> bool {
        matches!(
            self,
            AugRecord::Cutmix { .. } | AugRecord::Mixup { .. } | AugRecord::Cutmixup { .. }
        )
    }
}

/// Network-ready training sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSample {
    pub input: Image,
    pub target: Image,
    pub loss_mask: LossMask,
    pub record: AugRecord,
}

impl AugmentedSample {
    /// The pair unchanged, with an all-valid mask.
    pub fn passthrough(pair: &AlignedPair) -> Self {
        Self {
            input: pair.input.clone(),
            target: pair.target.clone(),
            loss_mask: LossMask::all_valid(pair.width(), pair.height()),
            record: AugRecord::None,
        }
    }

    /// Re-wraps the sample as a pair so further operators can be chained.
    pub fn into_pair(self, scale: usize, source_id: impl Into<String>) -> Result<AlignedPair> {
        AlignedPair::new(self.input, self.target, scale, source_id)
    }
}

/// Re-applies a recorded augmentation. Two-sample methods need `partner`.
pub fn replay(record: &AugRecord, pair: &AlignedPair, partner: Option<&AlignedPair>) -> Result<AugmentedSample> {
    let partner = || {
        partner.ok_or_else(|| {
            Error::InvalidPolicy(format!("{} replay needs a partner pair", record.method_name()))
        })
    };
    match record {
        AugRecord::None => Ok(AugmentedSample::passthrough(pair)),
        AugRecord::Cutblur { rect, direction } => cutblur_with(pair, *rect, *direction),
        AugRecord::Cutout { ratio, dropped } => cutout_with(pair, *ratio, dropped),
        AugRecord::Cutmix { rect } => cutmix_with(pair, partner()?, *rect),
        AugRecord::Mixup { lambda } => mixup_with(pair, partner()?, *lambda),
        AugRecord::Cutmixup { lambda, rect } => cutmixup_with(pair, partner()?, *lambda, *rect),
        AugRecord::RgbPermute { permutation } => rgb_permute_with(pair, *permutation),
        AugRecord::Blend { ratio, color } => blend_with(pair, *ratio, *color),
        AugRecord::FlipRotate { transform } => Ok(flip_rotate_with(pair, *transform)),
    }
}
