//! Bicubic resampling (a = −0.5) with pixel-center alignment and replicated
//! edges.
//!
//! Upsampling evaluates the 4-tap kernel at `(i + 0.5)/s − 0.5`. Downsampling
//! stretches the kernel by `s` (support `2s`, renormalized), which acts as an
//! antialiasing prefilter. Both directions clamp their output to `[0, 1]`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::{AlignedPair, Image};

/// Sharpness parameter of the cubic convolution kernel.
pub const KERNEL_A: f64 = -0.5;

/// Cubic convolution kernel; zero for `|x| >= 2`.
pub fn cubic(x: f64) -> f64 {
    let a = KERNEL_A;
    let x = x.abs();
    if x <= 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a
    } else {
        0.0
    }
}

/// Weights of the taps at offsets `(−1−t, −t, 1−t, 2−t)` for a fractional
/// position `t ∈ [0, 1)`, normalized to sum to one.
pub fn bicubic_weights(t: f64) -> Result<[f64; 4]> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain {
            name: "bicubic offset",
            value: t,
        });
    }
    let w = [cubic(1.0 + t), cubic(t), cubic(1.0 - t), cubic(2.0 - t)];
    let sum: f64 = w.iter().sum();
    Ok(w.map(|v| v / sum))
}

/// Taps of one output position along one axis.
#[derive(Debug, Clone)]
struct Taps {
    index: Vec<usize>,
    weight: Vec<f64>,
    /// Tap with the largest weight; sums are taken relative to its sample so
    /// constant regions come out exactly constant.
    anchor: usize,
}

impl Taps {
    fn new(index: Vec<usize>, weight: Vec<f64>) -> Self {
        let anchor = weight
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        Self { index, weight, anchor }
    }

    /// `Σ wᵢ·xᵢ` evaluated as `x_a + Σ wᵢ·(xᵢ − x_a)`, equal for unit-sum weights.
    #[inline]
    fn apply(&self, sample: impl Fn(usize) -> f64) -> f64 {
        let reference = sample(self.index[self.anchor]);
        reference
            + self
                .index
                .iter()
                .zip(&self.weight)
                .map(|(&k, &w)| w * (sample(k) - reference))
                .sum::<f64>()
    }
}

fn clamp_index(k: isize, len: usize) -> usize {
    k.clamp(0, len as isize - 1) as usize
}

fn upsample_taps(in_len: usize, s: usize) -> Vec<Taps> {
    (0..in_len * s)
        .map(|i| {
            let u = (i as f64 + 0.5) / s as f64 - 0.5;
            let base = u.floor();
            let weight = bicubic_weights(u - base).expect("fraction in [0,1)");
            let base = base as isize;
            Taps::new(
                (-1..=2).map(|d| clamp_index(base + d, in_len)).collect(),
                weight.to_vec(),
            )
        })
        .collect()
}

fn downsample_taps(in_len: usize, s: usize) -> Vec<Taps> {
    let support = 2.0 * s as f64;
    (0..in_len / s)
        .map(|j| {
            let u = (j as f64 + 0.5) * s as f64 - 0.5;
            let lo = (u - support).floor() as isize + 1;
            let hi = (u + support).ceil() as isize - 1;
            let mut index = Vec::with_capacity((hi - lo + 1) as usize);
            let mut weight = Vec::with_capacity(index.capacity());
            for k in lo..=hi {
                index.push(clamp_index(k, in_len));
                weight.push(cubic((u - k as f64) / s as f64));
            }
            let sum: f64 = weight.iter().sum();
            weight.iter_mut().for_each(|w| *w /= sum);
            Taps::new(index, weight)
        })
        .collect()
}

/// Separable filtering: horizontal pass in f64, then vertical pass, clamped.
fn filter(img: &Image, cols: &[Taps], rows: &[Taps]) -> Image {
    let (in_w, c) = (img.width(), img.channels());
    let out_w = cols.len();
    let src = img.data();
    let mut horizontal = vec![0.0f64; out_w * img.height() * c];
    horizontal
        .par_chunks_mut(out_w * c)
        .enumerate()
        .for_each(|(y, row)| {
            let src_row = &src[y * in_w * c..(y + 1) * in_w * c];
            for (x, taps) in cols.iter().enumerate() {
                for ch in 0..c {
                    row[x * c + ch] = taps.apply(|k| src_row[k * c + ch]);
                }
            }
        });
    let mut out = vec![0.0f64; out_w * rows.len() * c];
    out.par_chunks_mut(out_w * c)
        .zip(rows.par_iter())
        .for_each(|(row, taps)| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = taps.apply(|k| horizontal[k * out_w * c + i]);
            }
        });
    Image::from_clamped(out_w, rows.len(), c, out)
}

/// Bicubic upsampling by an integer factor `s ≥ 1`.
pub fn upsample_bicubic(img: &Image, s: usize) -> Result<Image> {
    if s == 0 {
        return Err(Error::Domain {
            name: "scale",
            value: 0.0,
        });
    }
    if s == 1 {
        return Ok(img.clone());
    }
    Ok(filter(
        img,
        &upsample_taps(img.width(), s),
        &upsample_taps(img.height(), s),
    ))
}

/// Antialiased bicubic decimation by an integer factor `s ≥ 1`.
pub fn downsample_bicubic(img: &Image, s: usize) -> Result<Image> {
    if s == 0 || !img.width().is_multiple_of(s) || !img.height().is_multiple_of(s) {
        return Err(Error::NotDivisible {
            width: img.width(),
            height: img.height(),
            scale: s,
        });
    }
    if s == 1 {
        return Ok(img.clone());
    }
    Ok(filter(
        img,
        &downsample_taps(img.width(), s),
        &downsample_taps(img.height(), s),
    ))
}

/// Puts an LR image on its HR grid so the pair can be mixed pixel-wise.
pub fn align_pair(lr: &Image, hr: &Image, s: usize, source_id: impl Into<String>) -> Result<AlignedPair> {
    if s == 0
        || lr.width() * s != hr.width()
        || lr.height() * s != hr.height()
        || lr.channels() != hr.channels()
    {
        return Err(Error::DimensionMismatch(format!(
            "lr {} x{s} does not match hr {}",
            lr.shape_str(),
            hr.shape_str()
        )));
    }
    AlignedPair::new(upsample_bicubic(lr, s)?, hr.clone(), s, source_id)
}
