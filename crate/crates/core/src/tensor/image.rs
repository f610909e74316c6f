use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};

/// A single image plane with unit-interval samples, row-major and
/// channel-interleaved.
///
/// Every sample is finite and in `[0, 1]`. Constructors reject anything else;
/// arithmetic inside the crate clamps before building an `Image`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidImage("zero channels".into()));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidImage(format!(
                "{} samples for {width}x{height}x{channels}",
                data.len()
            )));
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(Error::InvalidSample { index, value });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Builds an image from arbitrary values, clamping each to `[0, 1]`.
    /// Non-finite values map to 0.
    pub fn from_clamped(width: usize, height: usize, channels: usize, mut data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height * channels, "sample count");
        assert!(channels > 0, "zero channels");
        for v in &mut data {
            *v = clamp_unit(*v);
        }
        Self {
            width,
            height,
            channels,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self::from_clamped(width, height, channels, vec![0.0; width * height * channels])
    }

    /// Evaluates `f(x, y, c)` for every sample; results are clamped.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::from_clamped(width, height, channels, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn shape_str(&self) -> String {
        format!("{}x{}x{}", self.width, self.height, self.channels)
    }

    pub(crate) fn ensure_same_shape(&self, other: &Image, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {} vs {}",
                self.shape_str(),
                other.shape_str()
            )))
        }
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        (y * self.width + x) * self.channels + c
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[self.index(x, y, c)]
    }

    /// All channels of the pixel at `(x, y)`.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = self.index(x, y, 0);
        &self.data[i..i + self.channels]
    }

    pub fn crop(&self, x: usize, y: usize, width: usize, height: usize) -> Result<Image> {
        if x + width > self.width || y + height > self.height {
            return Err(Error::DimensionMismatch(format!(
                "crop {width}x{height}+{x}+{y} outside {}",
                self.shape_str()
            )));
        }
        let c = self.channels;
        let mut data = Vec::with_capacity(width * height * c);
        for row in y..y + height {
            let start = self.index(x, row, 0);
            data.extend_from_slice(&self.data[start..start + width * c]);
        }
        Ok(Image {
            width,
            height,
            channels: c,
            data,
        })
    }

    /// Extracts one channel as a single-channel image.
    pub fn channel(&self, c: usize) -> Image {
        assert!(c < self.channels, "channel {c} out of range");
        let data = self.data.iter().skip(c).step_by(self.channels).copied().collect();
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Applies `f` to every sample, clamping the result.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Image {
        Image::from_clamped(
            self.width,
            self.height,
            self.channels,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Samples quantized to 8 bits: `round(v * 255)`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| quantize_u8(v)).collect()
    }

    pub fn from_u8(width: usize, height: usize, channels: usize, bytes: &[u8]) -> Result<Image> {
        if bytes.len() != width * height * channels {
            return Err(Error::InvalidImage(format!(
                "{} bytes for {width}x{height}x{channels}",
                bytes.len()
            )));
        }
        Image::new(
            width,
            height,
            channels,
            bytes.iter().map(|&b| f64::from(b) / 255.0).collect(),
        )
    }

    /// The image as it would read back after an 8-bit save.
    pub fn quantized(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|&v| f64::from(quantize_u8(v)) / 255.0).collect(),
        }
    }

    /// Decodes an 8-bit PNG. Gray and RGB are kept; alpha is dropped;
    /// palette and sub-byte depths are expanded; 16-bit is reduced to 8.
    pub fn decode_png(bytes: &[u8]) -> Result<Image> {
        let mut decoder = png::Decoder::new(Cursor::new(bytes));
        decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = decoder.read_info().map_err(|e| Error::Png(e.to_string()))?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| Error::Png("image too large".into()))?;
        let mut buf = vec![0u8; size];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| Error::Png(e.to_string()))?;
        buf.truncate(info.buffer_size());
        let (w, h) = (info.width as usize, info.height as usize);
        let (src_channels, keep) = match info.color_type {
            png::ColorType::Grayscale => (1, 1),
            png::ColorType::GrayscaleAlpha => (2, 1),
            png::ColorType::Rgb => (3, 3),
            png::ColorType::Rgba => (4, 3),
            png::ColorType::Indexed => {
                return Err(Error::Png("unexpanded palette image".into()));
            }
        };
        let bytes: Vec<u8> = if src_channels == keep {
            buf
        } else {
            buf.chunks_exact(src_channels)
                .flat_map(|px| px[..keep].iter().copied())
                .collect()
        };
        Image::from_u8(w, h, keep, &bytes)
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let color = match self.channels {
            1 => png::ColorType::Grayscale,
            3 => png::ColorType::Rgb,
            n => {
                return Err(Error::ChannelCount {
                    expected: "1 or 3".into(),
                    actual: n,
                });
            }
        };
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            encoder.set_color(color);
            encoder.set_depth(png::BitDepth::Eight);
            encoder.set_compression(png::Compression::Fast);
            let mut writer = encoder.write_header().map_err(|e| Error::Png(e.to_string()))?;
            writer
                .write_image_data(&self.to_u8())
                .map_err(|e| Error::Png(e.to_string()))?;
            writer.finish().map_err(|e| Error::Png(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn load_png(path: impl AsRef<Path>) -> Result<Image> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Image::decode_png(&bytes).map_err(|e| match e {
            Error::Png(msg) => Error::Png(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::pipeline::write_atomic(path.as_ref(), &self.encode_png()?)
    }
}

#[inline]
fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) }
}

#[inline]
pub fn quantize_u8(v: f64) -> u8 {
    (clamp_unit(v) * 255.0).round() as u8
}
