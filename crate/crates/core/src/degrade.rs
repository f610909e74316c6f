//! Synthetic degradations for building training and evaluation pairs.

use std::fmt;

use jpeg_encoder::{ColorType, Encoder, QuantizationTableType, SamplingFactor};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resample::downsample_bicubic;
use crate::tensor::{Image, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum DegradeSpec {
    /// Bicubic downsampling by `scale ∈ {2, 3, 4}`.
    Sr { scale: usize },
    /// Additive color Gaussian noise; `sigma` on the 0–255 scale.
    Gaussian { sigma: f64 },
    /// JPEG compression at `quality ∈ [1, 100]`.
    Jpeg { quality: u8 },
}

impl DegradeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DegradeSpec::Sr { scale } if !(2..=4).contains(&scale) => Err(Error::Domain {
                name: "sr scale",
                value: scale as f64,
            }),
            DegradeSpec::Gaussian { sigma } if !(sigma > 0.0 && sigma <= 255.0) => Err(Error::Domain {
                name: "noise sigma",
                value: sigma,
            }),
            DegradeSpec::Jpeg { quality } if !(1..=100).contains(&quality) => Err(Error::Domain {
                name: "jpeg quality",
                value: f64::from(quality),
            }),
            _ => Ok(()),
        }
    }

    /// Resolution ratio between target and input.
    pub fn scale(&self) -> usize {
        match *self {
            DegradeSpec::Sr { scale } => scale,
            _ => 1,
        }
    }
}

impl fmt::Display for DegradeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegradeSpec::Sr { scale } => write!(f, "sr(x{scale})"),
            DegradeSpec::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma})"),
            DegradeSpec::Jpeg { quality } => write!(f, "jpeg(q={quality})"),
        }
    }
}

/// Adds i.i.d. `N(0, (σ/255)²)` noise to every sample, then clamps to `[0, 1]`.
pub fn add_gaussian_noise(img: &Image, sigma_255: f64, rng: &mut Rng) -> Result<Image> {
    if !(sigma_255 > 0.0 && sigma_255.is_finite()) {
        return Err(Error::Domain {
            name: "noise sigma",
            value: sigma_255,
        });
    }
    let std_dev = sigma_255 / 255.0;
    Ok(img.map(|v| v + rng.normal(0.0, std_dev)))
}

/// Baseline JFIF encoding with 4:2:0 chroma subsampling and the Annex K
/// tables scaled by `quality`.
pub fn jpeg_encode(img: &Image, quality: u8) -> Result<Vec<u8>> {
    if !(1..=100).contains(&quality) {
        return Err(Error::Domain {
            name: "jpeg quality",
            value: f64::from(quality),
        });
    }
    if img.channels() != 3 {
        return Err(Error::ChannelCount {
            expected: "3".into(),
            actual: img.channels(),
        });
    }
    let (w, h) = (
        u16::try_from(img.width()).map_err(|_| Error::Jpeg("width exceeds 65535".into()))?,
        u16::try_from(img.height()).map_err(|_| Error::Jpeg("height exceeds 65535".into()))?,
    );
    let mut out = Vec::new();
    let mut encoder = Encoder::new(&mut out, quality);
    encoder.set_sampling_factor(SamplingFactor::R_4_2_0);
    encoder.set_quantization_tables(QuantizationTableType::Default, QuantizationTableType::Default);
    encoder.set_progressive(false);
    encoder.set_optimized_huffman_tables(false);
    encoder
        .encode(&img.to_u8(), w, h, ColorType::Rgb)
        .map_err(|e| Error::Jpeg(e.to_string()))?;
    Ok(out)
}

pub fn jpeg_decode(bytes: &[u8]) -> Result<Image> {
    let mut decoder = jpeg_decoder::Decoder::new(std::io::Cursor::new(bytes));
    let pixels = decoder.decode().map_err(|e| Error::Jpeg(e.to_string()))?;
    let info = decoder
        .info()
        .ok_or_else(|| Error::Jpeg("missing frame header".into()))?;
    let channels = match info.pixel_format {
        jpeg_decoder::PixelFormat::L8 => 1,
        jpeg_decoder::PixelFormat::RGB24 => 3,
        other => return Err(Error::Jpeg(format!("unsupported pixel format {other:?}"))),
    };
    Image::from_u8(usize::from(info.width), usize::from(info.height), channels, &pixels)
}

/// Compresses and decompresses an RGB image.
pub fn jpeg_roundtrip(img: &Image, quality: u8) -> Result<Image> {
    jpeg_decode(&jpeg_encode(img, quality)?)
}

/// Bicubic LR/HR pair from a clean image.
pub fn make_sr_pair(hr: &Image, s: usize) -> Result<(Image, Image)> {
    Ok((downsample_bicubic(hr, s)?, hr.clone()))
}
