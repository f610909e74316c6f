use super::{AugRecord, AugmentedSample, CutblurDirection, Dihedral, RectMask, sample_cutmix_rect};
use crate::error::{Error, Result};
use crate::tensor::{AlignedPair, Image, LossMask, Rng};

pub const DEFAULT_CUTBLUR_ALPHA: f64 = 0.7;
pub const DEFAULT_CUTOUT_RATIO: f64 = 0.001;
pub const DEFAULT_CUTMIX_ALPHA: f64 = 0.7;
pub const DEFAULT_MIXUP_ALPHA: f64 = 1.2;
pub const DEFAULT_BLEND_ALPHA: f64 = 0.6;

/// The six channel orders, indexed by the uniform draw.
pub const RGB_PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn check_rect(rect: &RectMask, pair: &AlignedPair) -> Result<()> {
    if rect.fits(pair.width(), pair.height()) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "rect {}x{}+{}+{} outside {}x{}",
            rect.w,
            rect.h,
            rect.x,
            rect.y,
            pair.width(),
            pair.height()
        )))
    }
}

fn check_rgb(pair: &AlignedPair) -> Result<()> {
    if pair.channels() == 3 {
        Ok(())
    } else {
        Err(Error::ChannelCount {
            expected: "3".into(),
            actual: pair.channels(),
        })
    }
}

/// `inside` where the rectangle covers a pixel, `outside` elsewhere.
fn composite(outside: &Image, inside: &Image, rect: &RectMask) -> Image {
    let mut data = outside.data().to_vec();
    let c = outside.channels();
    for y in rect.y..rect.y + rect.h {
        let start = outside.index(rect.x, y, 0);
        let end = start + rect.w * c;
        data[start..end].copy_from_slice(&inside.data()[start..end]);
    }
    Image::from_clamped(outside.width(), outside.height(), c, data)
}

fn lerp(a: &Image, b: &Image, lambda: f64) -> Image {
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| lambda * x + (1.0 - lambda) * y)
        .collect();
    Image::from_clamped(a.width(), a.height(), a.channels(), data)
}

fn all_valid(pair: &AlignedPair) -> LossMask {
    LossMask::all_valid(pair.width(), pair.height())
}

/// CutBlur: mixes the aligned LR input and the HR target inside a random
/// rectangle, in a randomly chosen direction. The target is never touched.
pub fn cutblur(pair: &AlignedPair, alpha: f64, rng: &mut Rng) -> AugmentedSample {
    let rect = sample_cutmix_rect(pair.width(), pair.height(), alpha, rng);
    let direction = if rng.bernoulli(0.5) {
        CutblurDirection::HrToLr
    } else {
        CutblurDirection::LrToHr
    };
    cutblur_with(pair, rect, direction).expect("sampled rect lies inside the pair")
}

pub fn cutblur_with(pair: &AlignedPair, rect: RectMask, direction: CutblurDirection) -> Result<AugmentedSample> {
    check_rect(&rect, pair)?;
    let input = match direction {
        CutblurDirection::HrToLr => composite(&pair.input, &pair.target, &rect),
        CutblurDirection::LrToHr => composite(&pair.target, &pair.input, &rect),
    };
    Ok(AugmentedSample {
        input,
        target: pair.target.clone(),
        loss_mask: all_valid(pair),
        record: AugRecord::Cutblur { rect, direction },
    })
}

/// Pixel-wise Cutout: each pixel (all channels) is zeroed with probability
/// `ratio` and masked out of the loss.
pub fn cutout(pair: &AlignedPair, ratio: f64, rng: &mut Rng) -> Result<AugmentedSample> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::Domain {
            name: "cutout ratio",
            value: ratio,
        });
    }
    let dropped: Vec<usize> = (0..pair.width() * pair.height())
        .filter(|_| rng.bernoulli(ratio))
        .collect();
    cutout_with(pair, ratio, &dropped)
}

pub fn cutout_with(pair: &AlignedPair, ratio: f64, dropped: &[usize]) -> Result<AugmentedSample> {
    let pixels = pair.width() * pair.height();
    let c = pair.channels();
    let mut data = pair.input.data().to_vec();
    let mut mask = all_valid(pair);
    for &p in dropped {
        if p >= pixels {
            return Err(Error::DimensionMismatch(format!("cutout pixel {p} outside {pixels}")));
        }
        data[p * c..(p + 1) * c].fill(0.0);
        mask.set_invalid(p);
    }
    Ok(AugmentedSample {
        input: Image::from_clamped(pair.width(), pair.height(), c, data),
        target: pair.target.clone(),
        loss_mask: mask,
        record: AugRecord::Cutout {
            ratio,
            dropped: dropped.to_vec(),
        },
    })
}

/// CutMix: `b`'s pixels inside the rectangle, `a`'s outside, for both input
/// and target. Source and destination coordinates coincide.
pub fn cutmix(a: &AlignedPair, b: &AlignedPair, alpha: f64, rng: &mut Rng) -> Result<AugmentedSample> {
    a.ensure_same_shape(b)?;
    let rect = sample_cutmix_rect(a.width(), a.height(), alpha, rng);
    cutmix_with(a, b, rect)
}

pub fn cutmix_with(a: &AlignedPair, b: &AlignedPair, rect: RectMask) -> Result<AugmentedSample> {
    a.ensure_same_shape(b)?;
    check_rect(&rect, a)?;
    Ok(AugmentedSample {
        input: composite(&a.input, &b.input, &rect),
        target: composite(&a.target, &b.target, &rect),
        loss_mask: all_valid(a),
        record: AugRecord::Cutmix { rect },
    })
}

/// Mixup with `λ ~ Beta(α, α)`: `λ·a + (1 − λ)·b` on input and target.
pub fn mixup(a: &AlignedPair, b: &AlignedPair, alpha: f64, rng: &mut Rng) -> Result<AugmentedSample> {
    a.ensure_same_shape(b)?;
    check_positive("mixup alpha", alpha)?;
    let lambda = rng.beta(alpha, alpha);
    mixup_with(a, b, lambda)
}

pub fn mixup_with(a: &AlignedPair, b: &AlignedPair, lambda: f64) -> Result<AugmentedSample> {
    a.ensure_same_shape(b)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain {
            name: "mixup lambda",
            value: lambda,
        });
    }
    Ok(AugmentedSample {
        input: lerp(&a.input, &b.input, lambda),
        target: lerp(&a.target, &b.target, lambda),
        loss_mask: all_valid(a),
        record: AugRecord::Mixup { lambda },
    })
}

/// CutMix where the pasted content is the Mixup of `a` and `b`. The Mixup
/// ratio is drawn first (with `alpha2`), then the rectangle (with `alpha1`).
pub fn cutmixup(
    a: &AlignedPair,
    b: &AlignedPair,
    alpha1: f64,
    alpha2: f64,
    rng: &mut Rng,
) -> Result<AugmentedSample> {
    a.ensure_same_shape(b)?;
    check_positive("cutmixup alpha2", alpha2)?;
    let lambda = rng.beta(alpha2, alpha2);
    let rect = sample_cutmix_rect(a.width(), a.height(), alpha1, rng);
    cutmixup_with(a, b, lambda, rect)
}

pub fn cutmixup_with(a: &AlignedPair, b: &AlignedPair, lambda: f64, rect: RectMask) -> Result<AugmentedSample> {
    let mixed = mixup_with(a, b, lambda)?;
    check_rect(&rect, a)?;
    Ok(AugmentedSample {
        input: composite(&a.input, &mixed.input, &rect),
        target: composite(&a.target, &mixed.target, &rect),
        loss_mask: all_valid(a),
        record: AugRecord::Cutmixup { lambda, rect },
    })
}

/// Shuffles RGB channels with one of the six permutations, drawn uniformly.
pub fn rgb_permute(pair: &AlignedPair, rng: &mut Rng) -> Result<AugmentedSample> {
    check_rgb(pair)?;
    rgb_permute_with(pair, RGB_PERMUTATIONS[rng.below(6)])
}

/// Output channel `k` takes input channel `permutation[k]`.
pub fn rgb_permute_with(pair: &AlignedPair, permutation: [usize; 3]) -> Result<AugmentedSample> {
    check_rgb(pair)?;
    let mut sorted = permutation;
    sorted.sort_unstable();
    if sorted != [0, 1, 2] {
        return Err(Error::InvalidPolicy(format!("{permutation:?} is not a permutation")));
    }
    let permute = |img: &Image| {
        let data = img
            .data()
            .chunks_exact(3)
            .flat_map(|px| permutation.map(|k| px[k]))
            .collect();
        Image::from_clamped(img.width(), img.height(), 3, data)
    };
    Ok(AugmentedSample {
        input: permute(&pair.input),
        target: permute(&pair.target),
        loss_mask: all_valid(pair),
        record: AugRecord::RgbPermute { permutation },
    })
}

/// Blends towards a random constant color: `v·img + (1 − v)·c` with
/// `c ~ Unif(0, 1)³` and `v ~ Unif(α, 1)`, the same `(v, c)` for input and
/// target. Draw order: the three color channels, then `v`.
pub fn blend(pair: &AlignedPair, alpha: f64, rng: &mut Rng) -> Result<AugmentedSample> {
    check_rgb(pair)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain {
            name: "blend alpha",
            value: alpha,
        });
    }
    let color = [rng.uniform(), rng.uniform(), rng.uniform()];
    let ratio = rng.uniform_in(alpha, 1.0);
    blend_with(pair, ratio, color)
}

pub fn blend_with(pair: &AlignedPair, ratio: f64, color: [f64; 3]) -> Result<AugmentedSample> {
    check_rgb(pair)?;
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::Domain {
            name: "blend ratio",
            value: ratio,
        });
    }
    let apply = |img: &Image| {
        let data = img
            .data()
            .chunks_exact(3)
            .flat_map(|px| [0, 1, 2].map(|k| ratio * px[k] + (1.0 - ratio) * color[k]))
            .collect();
        Image::from_clamped(img.width(), img.height(), 3, data)
    };
    Ok(AugmentedSample {
        input: apply(&pair.input),
        target: apply(&pair.target),
        loss_mask: all_valid(pair),
        record: AugRecord::Blend { ratio, color },
    })
}

/// One of the eight flips/rotations, drawn uniformly, applied to both images.
pub fn flip_rotate(pair: &AlignedPair, rng: &mut Rng) -> AugmentedSample {
    flip_rotate_with(pair, Dihedral::sample(rng))
}

pub fn flip_rotate_with(pair: &AlignedPair, transform: Dihedral) -> AugmentedSample {
    let input = transform.apply(&pair.input);
    let target = transform.apply(&pair.target);
    AugmentedSample {
        loss_mask: LossMask::all_valid(target.width(), target.height()),
        input,
        target,
        record: AugRecord::FlipRotate { transform },
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
