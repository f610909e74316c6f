//! PSNR, SSIM, luma conversion and residual maps.
//!
//! No border is shaved before measuring.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Image;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMode {
    /// BT.601 luma only.
    YOnly,
    /// All channels.
    Rgb,
}

impl FromStr for ChannelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "y" | "y_only" => Ok(ChannelMode::YOnly),
            "rgb" => Ok(ChannelMode::Rgb),
            other => Err(Error::Config(format!("unknown channel mode `{other}`"))),
        }
    }
}

impl fmt::Display for ChannelMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelMode::YOnly => "y",
            ChannelMode::Rgb => "rgb",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// `+∞` for identical images; serialized as the string `"inf"`.
    #[serde(with = "psnr_value")]
    pub psnr_db: f64,
    pub ssim: f64,
    pub channel_mode: ChannelMode,
}

/// JSON has no infinity; PSNR of identical images is written as `"inf"`.
pub mod psnr_value {
    use serde::{Deserialize, Deserializer, Serializer, de::Error};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(D::Error::custom(format!("bad psnr `{s}`"))),
        }
    }
}

/// BT.601 studio-range luma: `(65.481 R + 128.553 G + 24.966 B + 16) / 255`.
pub fn rgb_to_y(img: &Image) -> Result<Image> {
    if img.channels() != 3 {
        return Err(Error::ChannelCount {
            expected: "3".into(),
            actual: img.channels(),
        });
    }
    let data = img
        .data()
        .chunks_exact(3)
        .map(|px| (65.481 * px[0] + 128.553 * px[1] + 24.966 * px[2] + 16.0) / 255.0)
        .collect();
    Image::new(img.width(), img.height(), 1, data)
}

/// Compensated (Neumaier) sum.
fn accurate_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    a.ensure_same_shape(b, "mse")?;
    let n = a.data().len();
    if n == 0 {
        return Err(Error::InvalidImage("empty image".into()));
    }
    let sum = accurate_sum(a.data().iter().zip(b.data()).map(|(x, y)| (x - y) * (x - y)));
    Ok(sum / n as f64)
}

/// `10·log10(peak² / MSE)`, `+∞` when the images are identical.
pub fn psnr(a: &Image, b: &Image, peak: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::Domain {
            name: "psnr peak",
            value: peak,
        });
    }
    let mse = mse(a, b)?;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    })
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let half = (SSIM_WINDOW / 2) as f64;
    let mut w = [0.0; SSIM_WINDOW];
    for (i, v) in w.iter_mut().enumerate() {
        let d = i as f64 - half;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let sum: f64 = w.iter().sum();
    w.map(|v| v / sum)
}

/// Valid-region separable Gaussian filtering of a `w × h` plane.
fn filter_valid(plane: &[f64], w: usize, h: usize, win: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let (ow, oh) = (w + 1 - SSIM_WINDOW, h + 1 - SSIM_WINDOW);
    let mut horizontal = vec![0.0; ow * h];
    for y in 0..h {
        let row = &plane[y * w..(y + 1) * w];
        for x in 0..ow {
            horizontal[y * ow + x] = win.iter().zip(&row[x..]).map(|(k, v)| k * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = win
                .iter()
                .enumerate()
                .map(|(i, k)| k * horizontal[(y + i) * ow + x])
                .sum();
        }
    }
    out
}

/// Mean SSIM of two single-channel images over all fully-contained 11×11
/// Gaussian windows (σ = 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1).
pub fn ssim(a: &Image, b: &Image) -> Result<f64> {
    a.ensure_same_shape(b, "ssim")?;
    if a.channels() != 1 {
        return Err(Error::ChannelCount {
            expected: "1".into(),
            actual: a.channels(),
        });
    }
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::DimensionMismatch(format!(
            "ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}"
        )));
    }
    let win = gaussian_window();
    let (x, y) = (a.data(), b.data());
    let product = |p: &[f64], q: &[f64]| -> Vec<f64> { p.iter().zip(q).map(|(u, v)| u * v).collect() };
    let mu_x = filter_valid(x, w, h, &win);
    let mu_y = filter_valid(y, w, h, &win);
    let xx = filter_valid(&product(x, x), w, h, &win);
    let yy = filter_valid(&product(y, y), w, h, &win);
    let xy = filter_valid(&product(x, y), w, h, &win);
    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;
    let n = mu_x.len();
    let total = accurate_sum((0..n).map(|i| {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = xx[i] - mx * mx;
        let var_y = yy[i] - my * my;
        let cov = xy[i] - mx * my;
        ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (var_x + var_y + c2))
    }));
    Ok(total / n as f64)
}

/// Per-sample `|a − b|`.
pub fn residual_map(a: &Image, b: &Image) -> Result<Image> {
    a.ensure_same_shape(b, "residual map")?;
    Image::new(
        a.width(),
        a.height(),
        a.channels(),
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).collect(),
    )
}

/// PSNR (peak 1) and SSIM under the given channel mode. In Y mode RGB
/// images are converted to luma and single-channel images are used as is;
/// in RGB mode SSIM is averaged over channels.
pub fn evaluate(a: &Image, b: &Image, mode: ChannelMode) -> Result<MetricReport> {
    a.ensure_same_shape(b, "evaluate")?;
    let (psnr_db, ssim) = match (mode, a.channels()) {
        (_, 1) => (psnr(a, b, 1.0)?, ssim(a, b)?),
        (ChannelMode::YOnly, _) => {
            let (ya, yb) = (rgb_to_y(a)?, rgb_to_y(b)?);
            (psnr(&ya, &yb, 1.0)?, ssim(&ya, &yb)?)
        }
        (ChannelMode::Rgb, c) => {
            let mut total = 0.0;
            for ch in 0..c {
                total += ssim(&a.channel(ch), &b.channel(ch))?;
            }
            (psnr(a, b, 1.0)?, total / c as f64)
        }
    };
    Ok(MetricReport {
        psnr_db,
        ssim,
        channel_mode: mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Rng;

    fn random(w: usize, h: usize, c: usize, rng: &mut Rng) -> Image {
        Image::from_fn(w, h, c, |_, _, _| rng.uniform())
    }

    /// Per-window SSIM straight from the definition, with 2-D weights built
    /// from the Gaussian directly and central moments.
    fn ssim_oracle(a: &Image, b: &Image) -> f64 {
        let half = 5isize;
        let mut weights = [[0.0f64; 11]; 11];
        let mut norm = 0.0;
        for (i, row) in weights.iter_mut().enumerate() {
            for (j, w) in row.iter_mut().enumerate() {
                let (di, dj) = (i as isize - half, j as isize - half);
                *w = (-((di * di + dj * dj) as f64) / (2.0 * 1.5 * 1.5)).exp();
                norm += *w;
            }
        }
        let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
        let mut total = 0.0;
        let mut count = 0;
        for y0 in 0..=a.height() - 11 {
            for x0 in 0..=a.width() - 11 {
                let (mut mx, mut my) = (0.0, 0.0);
                for i in 0..11 {
                    for j in 0..11 {
                        let w = weights[i][j] / norm;
                        mx += w * a.get(x0 + j, y0 + i, 0);
                        my += w * b.get(x0 + j, y0 + i, 0);
                    }
                }
                let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
                for i in 0..11 {
                    for j in 0..11 {
                        let w = weights[i][j] / norm;
                        let dx = a.get(x0 + j, y0 + i, 0) - mx;
                        let dy = b.get(x0 + j, y0 + i, 0) - my;
                        vx += w * dx * dx;
                        vy += w * dy * dy;
                        cxy += w * dx * dy;
                    }
                }
                total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
            }
        }
        total / count as f64
    }

    #[test]
    fn luma_reference_colors() {
        let img = Image::new(3, 1, 3, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.5]).unwrap();
        let y = rgb_to_y(&img).unwrap();
        assert!((y.get(0, 0, 0) - 16.0 / 255.0).abs() < 1e-12);
        assert!((y.get(1, 0, 0) - 235.0 / 255.0).abs() < 1e-12);
        assert!((y.get(2, 0, 0) - 125.5 / 255.0).abs() < 1e-12);
        assert!(rgb_to_y(&y).is_err());
    }

    #[test]
    fn psnr_cases() {
        let mut rng = Rng::new(1);
        let a = random(16, 16, 3, &mut rng);
        assert_eq!(psnr(&a, &a, 1.0).unwrap(), f64::INFINITY);
        for (w, h, c) in [(1, 1, 1), (32, 32, 3), (48, 48, 3), (480, 320, 3)] {
            let hi = Image::filled(w, h, c, 0.1).unwrap();
            let lo = Image::zeros(w, h, c);
            assert_eq!(psnr(&hi, &lo, 1.0).unwrap(), 20.0, "{w}x{h}x{c}");
        }
        let b = random(16, 16, 3, &mut rng);
        assert_eq!(psnr(&a, &b, 1.0).unwrap(), psnr(&b, &a, 1.0).unwrap());
        assert!(psnr(&a, &Image::zeros(16, 15, 3), 1.0).is_err());
        assert!(psnr(&a, &b, 0.0).is_err());
    }

    #[test]
    fn psnr_of_constant_shift() {
        let mut rng = Rng::new(2);
        let a = Image::from_fn(20, 20, 1, |_, _, _| 0.2 + 0.5 * rng.uniform());
        let c: f64 = 0.05;
        let b = a.map(|v| v + c);
        let want = 20.0 * (1.0 / c).log10();
        assert!((psnr(&a, &b, 1.0).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn ssim_identity_and_constants() {
        let mut rng = Rng::new(3);
        let a = random(32, 32, 1, &mut rng);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let p = Image::filled(16, 16, 1, 0.5).unwrap();
        let q = Image::filled(16, 16, 1, 0.6).unwrap();
        let closed = (2.0 * 0.5 * 0.6 + 1e-4) / (0.25 + 0.36 + 1e-4);
        assert!((ssim(&p, &q).unwrap() - closed).abs() < 1e-9);
        assert!((closed - 0.983609).abs() < 1e-6);
    }

    #[test]
    fn ssim_matches_window_oracle() {
        let mut rng = Rng::new(4);
        for _ in 0..10 {
            let a = random(32, 32, 1, &mut rng);
            let b = random(32, 32, 1, &mut rng);
            let got = ssim(&a, &b).unwrap();
            assert!((got - ssim_oracle(&a, &b)).abs() < 1e-6);
            assert_eq!(got, ssim(&b, &a).unwrap());
            assert!((-1.0..=1.0).contains(&got));
        }
    }

    #[test]
    fn ssim_input_errors() {
        let a = Image::zeros(10, 20, 1);
        assert!(ssim(&a, &a).is_err());
        let rgb = Image::zeros(20, 20, 3);
        assert!(matches!(ssim(&rgb, &rgb), Err(Error::ChannelCount { .. })));
    }

    #[test]
    fn residuals() {
        let mut rng = Rng::new(5);
        let a = random(9, 7, 3, &mut rng);
        let b = random(9, 7, 3, &mut rng);
        assert!(residual_map(&a, &a).unwrap().data().iter().all(|&v| v == 0.0));
        let r = residual_map(&a, &b).unwrap();
        assert_eq!(r, residual_map(&b, &a).unwrap());
        let direct = a
            .data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert_eq!(r.data().iter().copied().fold(0.0, f64::max), direct);
    }

    #[test]
    fn y_mode_uses_luma_projection() {
        let mut rng = Rng::new(6);
        let a = random(24, 24, 3, &mut rng);
        let b = random(24, 24, 3, &mut rng);
        let report = evaluate(&a, &b, ChannelMode::YOnly).unwrap();
        let (ya, yb) = (rgb_to_y(&a).unwrap(), rgb_to_y(&b).unwrap());
        assert_eq!(report.psnr_db, psnr(&ya, &yb, 1.0).unwrap());
        assert_eq!(report.ssim, ssim(&ya, &yb).unwrap());

        let (ga, gb) = (a.channel(0), b.channel(1));
        let y = evaluate(&ga, &gb, ChannelMode::YOnly).unwrap();
        let rgb = evaluate(&ga, &gb, ChannelMode::Rgb).unwrap();
        assert_eq!((y.psnr_db, y.ssim), (rgb.psnr_db, rgb.ssim));
    }

    #[test]
    fn report_json_handles_infinity() {
        let report = MetricReport {
            psnr_db: f64::INFINITY,
            ssim: 1.0,
            channel_mode: ChannelMode::YOnly,
        };
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"inf\""));
        assert_eq!(serde_json::from_str::<MetricReport>(&json).unwrap(), report);
    }
}
