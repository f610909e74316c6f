use serde::{Deserialize, Serialize};

use crate::tensor::Rng;

/// Variance of the side-fraction draw `λ ~ N(α, 0.01)`.
pub const LAMBDA_VARIANCE: f64 = 0.01;

/// Axis-aligned cut region, already clipped to the image.
///
/// `lambda` is the side fraction as drawn (after clamping to `[0, 1]`,
/// before clipping the rectangle to the image bounds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectMask {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
    pub lambda: f64,
}

impl RectMask {
    pub fn empty() -> Self {
        Self {
            x: 0,
            y: 0,
            w: 0,
            h: 0,
            lambda: 0.0,
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            x: 0,
            y: 0,
            w: width,
            h: height,
            lambda: 1.0,
        }
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.w && y >= self.y && y < self.y + self.h
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn is_empty(&self) -> bool {
        self.area() == 0
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.x + self.w <= width && self.y + self.h <= height
    }
}

/// Draws a CutMix-style rectangle: `λ ~ N(α, 0.01)` clamped to `[0, 1]`,
/// sides `round(λ·W) × round(λ·H)`, top-left uniform over the image, then
/// clipped to the bounds. Draw order: λ, x, y.
pub fn sample_cutmix_rect(width: usize, height: usize, alpha: f64, rng: &mut Rng) -> RectMask {
    let lambda = rng.normal(alpha, LAMBDA_VARIANCE.sqrt()).clamp(0.0, 1.0);
    let w = (lambda * width as f64).round() as usize;
    let h = (lambda * height as f64).round() as usize;
    let x = if width > 0 { rng.below(width) } else { 0 };
    let y = if height > 0 { rng.below(height) } else { 0 };
    RectMask {
        x,
        y,
        w: w.min(width - x),
        h: h.min(height - y),
        lambda,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_mean_matches_alpha() {
        let mut rng = Rng::new(1);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| sample_cutmix_rect(48, 48, 0.7, &mut rng).lambda)
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.7).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn rects_stay_in_bounds() {
        let mut rng = Rng::new(2);
        for i in 0..10_000 {
            let (w, h) = (1 + i % 50, 1 + (i * 7) % 61);
            let r = sample_cutmix_rect(w, h, 0.7, &mut rng);
            assert!(r.fits(w, h), "{r:?} in {w}x{h}");
            assert!((0.0..=1.0).contains(&r.lambda));
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = sample_cutmix_rect(96, 64, 0.7, &mut Rng::new(77));
        let b = sample_cutmix_rect(96, 64, 0.7, &mut Rng::new(77));
        assert_eq!(a, b);
    }

    #[test]
    fn contains_matches_bounds() {
        let r = RectMask {
            x: 2,
            y: 1,
            w: 3,
            h: 2,
            lambda: 0.5,
        };
        assert!(r.contains(2, 1) && r.contains(4, 2));
        assert!(!r.contains(5, 1) && !r.contains(2, 3) && !r.contains(1, 1));
        assert!(RectMask::empty().is_empty());
    }
}
