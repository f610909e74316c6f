//! Space-to-depth (`desubpixel`) and depth-to-space (`subpixel`) reshapes.

use super::Image;
use crate::error::{Error, Result};

/// Folds each `s×s` block into channels: `(W, H, C)` becomes `(W/s, H/s, C·s²)`
/// with `out[i, j, c·s² + dy·s + dx] = img[i·s + dy, j·s + dx, c]`.
pub fn desubpixel(img: &Image, s: usize) -> Result<Image> {
    if s == 0 || !img.width().is_multiple_of(s) || !img.height().is_multiple_of(s) {
        return Err(Error::NotDivisible {
            width: img.width(),
            height: img.height(),
            scale: s,
        });
    }
    let (w, h, c) = (img.width() / s, img.height() / s, img.channels());
    let oc = c * s * s;
    let mut out = vec![0.0; w * h * oc];
    for i in 0..h {
        for j in 0..w {
            let base = (i * w + j) * oc;
            for ch in 0..c {
                for dy in 0..s {
                    for dx in 0..s {
                        out[base + ch * s * s + dy * s + dx] = img.get(j * s + dx, i * s + dy, ch);
                    }
                }
            }
        }
    }
    Image::new(w, h, oc, out)
}

/// Inverse of [`desubpixel`].
pub fn subpixel(img: &Image, s: usize) -> Result<Image> {
    let ss = s * s;
    if s == 0 || !img.channels().is_multiple_of(ss) {
        return Err(Error::ChannelCount {
            expected: format!("a multiple of {ss}"),
            actual: img.channels(),
        });
    }
    let c = img.channels() / ss;
    let (w, h) = (img.width() * s, img.height() * s);
    let mut out = vec![0.0; w * h * c];
    for i in 0..img.height() {
        for j in 0..img.width() {
            for ch in 0..c {
                for dy in 0..s {
                    for dx in 0..s {
                        let (x, y) = (j * s + dx, i * s + dy);
                        out[(y * w + x) * c + ch] = img.get(j, i, ch * ss + dy * s + dx);
                    }
                }
            }
        }
    }
    Image::new(w, h, c, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Rng;

    fn random_image(w: usize, h: usize, c: usize, seed: u64) -> Image {
        let mut rng = Rng::new(seed);
        Image::from_fn(w, h, c, |_, _, _| rng.uniform())
    }

    #[test]
    fn scale_one_is_identity() {
        let img = random_image(5, 3, 3, 1);
        assert_eq!(desubpixel(&img, 1).unwrap(), img);
        assert_eq!(subpixel(&img, 1).unwrap(), img);
    }

    #[test]
    fn smallest_block() {
        let (a, b, c, d) = (0.1, 0.2, 0.3, 0.4);
        let img = Image::new(2, 2, 1, vec![a, b, c, d]).unwrap();
        let folded = desubpixel(&img, 2).unwrap();
        assert_eq!((folded.width(), folded.height(), folded.channels()), (1, 1, 4));
        assert_eq!(folded.data(), &[a, b, c, d]);
        assert_eq!(subpixel(&folded, 2).unwrap(), img);
    }

    #[test]
    fn round_trips() {
        let img = random_image(8, 8, 3, 2);
        assert_eq!(subpixel(&desubpixel(&img, 2).unwrap(), 2).unwrap(), img);
        let img = random_image(16, 16, 3, 3);
        assert_eq!(subpixel(&desubpixel(&img, 4).unwrap(), 4).unwrap(), img);
    }

    #[test]
    fn errors() {
        let img = random_image(6, 4, 1, 4);
        assert!(matches!(desubpixel(&img, 4), Err(Error::NotDivisible { .. })));
        assert!(matches!(subpixel(&img, 2), Err(Error::ChannelCount { .. })));
    }
}
