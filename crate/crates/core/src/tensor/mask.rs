use std::io::Cursor;
use std::path::Path;

use crate::error::{Error, Result};

/// Per-pixel validity grid; invalid pixels are excluded from the training loss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossMask {
    width: usize,
    height: usize,
    valid: Vec<bool>,
}

impl LossMask {
    pub fn all_valid(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            valid: vec![true; width * height],
        }
    }

    pub fn from_valid(width: usize, height: usize, valid: Vec<bool>) -> Result<Self> {
        if valid.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} mask entries for {width}x{height}",
                valid.len()
            )));
        }
        Ok(Self {
            width,
            height,
            valid,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[y * self.width + x]
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn invalid_count(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }

    pub(crate) fn set_invalid(&mut self, pixel: usize) {
        self.valid[pixel] = false;
    }

    /// 1-bit grayscale PNG: white = valid, black = invalid.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let row_bytes = self.width.div_ceil(8);
        let mut packed = vec![0u8; row_bytes * self.height];
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_valid(x, y) {
                    packed[y * row_bytes + x / 8] |= 0x80 >> (x % 8);
                }
            }
        }
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            encoder.set_color(png::ColorType::Grayscale);
            encoder.set_depth(png::BitDepth::One);
            let mut writer = encoder.write_header().map_err(|e| Error::Png(e.to_string()))?;
            writer
                .write_image_data(&packed)
                .map_err(|e| Error::Png(e.to_string()))?;
            writer.finish().map_err(|e| Error::Png(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Self> {
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
        if info.color_type != png::ColorType::Grayscale {
            return Err(Error::Png(format!("mask must be grayscale, got {:?}", info.color_type)));
        }
        let (w, h) = (info.width as usize, info.height as usize);
        let valid = buf[..w * h].iter().map(|&v| v >= 128).collect();
        Self::from_valid(w, h, valid)
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::pipeline::write_atomic(path.as_ref(), &self.encode_png()?)
    }

    pub fn load_png(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode_png(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bit_png_round_trip() {
        let valid: Vec<bool> = (0..13 * 5).map(|i| i % 7 != 3).collect();
        let mask = LossMask::from_valid(13, 5, valid).unwrap();
        let bytes = mask.encode_png().unwrap();
        assert_eq!(LossMask::decode_png(&bytes).unwrap(), mask);
    }

    #[test]
    fn counts_invalid() {
        let mut mask = LossMask::all_valid(4, 4);
        assert_eq!(mask.invalid_count(), 0);
        mask.set_invalid(5);
        assert!(!mask.is_valid(1, 1));
        assert_eq!(mask.invalid_count(), 1);
    }
}
