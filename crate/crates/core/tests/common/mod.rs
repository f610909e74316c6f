#![allow(dead_code)]

use std::path::Path;

use pairaug::{Image, Rng, testcard};

/// Cubic convolution kernel (a = −0.5) written out piecewise.
pub fn keys_kernel(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        1.5 * x.powi(3) - 2.5 * x.powi(2) + 1.0
    } else if x < 2.0 {
        -0.5 * x.powi(3) + 2.5 * x.powi(2) - 4.0 * x + 2.0
    } else {
        0.0
    }
}

/// Direct 2-D kernel sum for bicubic upsampling by `s` with clamped edges,
/// clamped output.
pub fn upsample_oracle(img: &Image, s: usize) -> Image {
    let (w, h, c) = (img.width(), img.height(), img.channels());
    Image::from_fn(w * s, h * s, c, |x, y, ch| {
        let u = (x as f64 + 0.5) / s as f64 - 0.5;
        let v = (y as f64 + 0.5) / s as f64 - 0.5;
        let mut acc = 0.0;
        for ky in (v.floor() as isize - 1)..=(v.floor() as isize + 2) {
            for kx in (u.floor() as isize - 1)..=(u.floor() as isize + 2) {
                let sx = kx.clamp(0, w as isize - 1) as usize;
                let sy = ky.clamp(0, h as isize - 1) as usize;
                acc += keys_kernel(u - kx as f64) * keys_kernel(v - ky as f64) * img.get(sx, sy, ch);
            }
        }
        acc
    })
}

/// Sliding-window SSIM from the definition: 11×11 Gaussian (σ = 1.5),
/// central moments per window.
pub fn ssim_oracle(a: &Image, b: &Image) -> f64 {
    let mut weights = [[0.0f64; 11]; 11];
    let mut norm = 0.0;
    for i in 0..11 {
        for j in 0..11 {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            weights[i][j] = (-(di * di + dj * dj) / 4.5).exp();
            norm += weights[i][j];
        }
    }
    let (c1, c2) = (1e-4, 9e-4);
    let mut total = 0.0;
    let mut count = 0usize;
    for y0 in 0..=a.height() - 11 {
        for x0 in 0..=a.width() - 11 {
            let (mut ma, mut mb) = (0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let w = weights[i][j] / norm;
                    ma += w * a.get(x0 + j, y0 + i, 0);
                    mb += w * b.get(x0 + j, y0 + i, 0);
                }
            }
            let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let w = weights[i][j] / norm;
                    let da = a.get(x0 + j, y0 + i, 0) - ma;
                    let db = b.get(x0 + j, y0 + i, 0) - mb;
                    va += w * da * da;
                    vb += w * db * db;
                    cov += w * da * db;
                }
            }
            total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            count += 1;
        }
    }
    total / count as f64
}

pub fn random_image(w: usize, h: usize, c: usize, rng: &mut Rng) -> Image {
    Image::from_fn(w, h, c, |_, _, _| rng.uniform())
}

/// Writes `count` test cards as `card_XX.png` into `dir`.
pub fn write_cards(dir: &Path, count: u64, width: usize, height: usize) {
    std::fs::create_dir_all(dir).unwrap();
    for i in 0..count {
        testcard::render(i, width, height)
            .save_png(dir.join(format!("card_{i:02}.png")))
            .unwrap();
    }
}

/// Every file under `dir` (recursively) with its bytes, sorted by path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
