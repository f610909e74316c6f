//! Procedural RGB test cards: smooth shading, soft-edged shapes, and
//! textured regions, so resampling and compression have both flat areas
//! and detail to work on. Card `i` is identical on every platform.

use crate::tensor::{Image, Rng, derive_item_seed};

const CARD_SEED: u64 = 0x7e57_ca2d_0000_0001;

struct Blob {
    cx: f64,
    cy: f64,
    radius: f64,
    color: [f64; 3],
    square: bool,
}

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
    amp: [f64; 3],
}

/// Renders test card `index` at `width × height`.
pub fn render(index: u64, width: usize, height: usize) -> Image {
    let mut rng = Rng::new(derive_item_seed(CARD_SEED, index));
    let base: [f64; 3] = [rng.uniform_in(0.2, 0.6), rng.uniform_in(0.2, 0.6), rng.uniform_in(0.2, 0.6)];
    let tilt: [f64; 3] = [rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25), rng.uniform_in(-0.25, 0.25)];
    let angle = rng.uniform_in(0.0, std::f64::consts::TAU);
    let (dx, dy) = (angle.cos(), angle.sin());

    let scale = width.min(height) as f64;
    let blobs: Vec<Blob> = (0..6)
        .map(|_| Blob {
            cx: rng.uniform() * width as f64,
            cy: rng.uniform() * height as f64,
            radius: rng.uniform_in(0.08, 0.3) * scale,
            color: [rng.uniform(), rng.uniform(), rng.uniform()],
            square: rng.bernoulli(0.4),
        })
        .collect();
    let waves: Vec<Wave> = (0..3)
        .map(|k| {
            let period = rng.uniform_in(3.0, 24.0) * (1.0 + k as f64);
            let dir = rng.uniform_in(0.0, std::f64::consts::TAU);
            Wave {
                fx: dir.cos() / period,
                fy: dir.sin() / period,
                phase: rng.uniform_in(0.0, std::f64::consts::TAU),
                amp: [rng.uniform_in(0.0, 0.08), rng.uniform_in(0.0, 0.08), rng.uniform_in(0.0, 0.08)],
            }
        })
        .collect();
    // a patch of fine stripes
    let stripe = (
        rng.uniform() * width as f64 * 0.7,
        rng.uniform() * height as f64 * 0.7,
        rng.uniform_in(2.0, 5.0),
    );

    Image::from_fn(width, height, 3, |x, y, c| {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        let t = (fx * dx + fy * dy) / scale;
        let mut v = base[c] + tilt[c] * t;
        for w in &waves {
            v += w.amp[c] * (std::f64::consts::TAU * (w.fx * fx + w.fy * fy) + w.phase).sin();
        }
        for b in &blobs {
            let d = if b.square {
                (fx - b.cx).abs().max((fy - b.cy).abs())
            } else {
                ((fx - b.cx).powi(2) + (fy - b.cy).powi(2)).sqrt()
            };
            // soft edge about one pixel wide
            let cover = (b.radius - d + 0.5).clamp(0.0, 1.0);
            v = v * (1.0 - 0.8 * cover) + 0.8 * cover * b.color[c];
        }
        let (sx, sy, period) = stripe;
        if fx >= sx && fx < sx + width as f64 * 0.25 && fy >= sy && fy < sy + height as f64 * 0.25 {
            v += 0.15 * (std::f64::consts::TAU * fx / period).sin();
        }
        v
    })
}
