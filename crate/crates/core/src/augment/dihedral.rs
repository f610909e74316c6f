use serde::{Deserialize, Serialize};

use crate::tensor::{Image, Rng};

/// The eight symmetries of the square. Rotations are counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dihedral {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipHorizontal,
    FlipVertical,
    Transpose,
    AntiTranspose,
}

impl Dihedral {
    pub const ALL: [Dihedral; 8] = [
        Dihedral::Identity,
        Dihedral::Rot90,
        Dihedral::Rot180,
        Dihedral::Rot270,
        Dihedral::FlipHorizontal,
        Dihedral::FlipVertical,
        Dihedral::Transpose,
        Dihedral::AntiTranspose,
    ];

    pub fn sample(rng: &mut Rng) -> Self {
        Self::ALL[rng.below(8)]
    }

    pub fn swaps_axes(self) -> bool {
        matches!(
            self,
            Dihedral::Rot90 | Dihedral::Rot270 | Dihedral::Transpose | Dihedral::AntiTranspose
        )
    }

    pub fn inverse(self) -> Self {
        match self {
            Dihedral::Rot90 => Dihedral::Rot270,
            Dihedral::Rot270 => Dihedral::Rot90,
            other => other,
        }
    }

    /// Source coordinate for output `(x, y)` of an input sized `w × h`.
    #[inline]
    fn source(self, x: usize, y: usize, w: usize, h: usize) -> (usize, usize) {
        match self {
            Dihedral::Identity => (x, y),
            Dihedral::Rot90 => (w - 1 - y, x),
            Dihedral::Rot180 => (w - 1 - x, h - 1 - y),
            Dihedral::Rot270 => (y, h - 1 - x),
            Dihedral::FlipHorizontal => (w - 1 - x, y),
            Dihedral::FlipVertical => (x, h - 1 - y),
            Dihedral::Transpose => (y, x),
            Dihedral::AntiTranspose => (w - 1 - y, h - 1 - x),
        }
    }

    pub fn apply(self, img: &Image) -> Image {
        if self == Dihedral::Identity {
            return img.clone();
        }
        let (w, h, c) = (img.width(), img.height(), img.channels());
        let (ow, oh) = if self.swaps_axes() { (h, w) } else { (w, h) };
        let mut data = Vec::with_capacity(img.data().len());
        for y in 0..oh {
            for x in 0..ow {
                let (sx, sy) = self.source(x, y, w, h);
                data.extend_from_slice(img.pixel(sx, sy));
            }
        }
        Image::from_clamped(ow, oh, c, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, 3, |x, y, c| ((x * 31 + y * 17 + c) % 97) as f64 / 96.0)
    }

    #[test]
    fn group_laws() {
        let img = card(5, 3);
        let mut r = img.clone();
        for _ in 0..4 {
            r = Dihedral::Rot90.apply(&r);
        }
        assert_eq!(r, img);
        let f = Dihedral::FlipHorizontal;
        assert_eq!(f.apply(&f.apply(&img)), img);
        assert_eq!(
            Dihedral::Rot90.apply(&Dihedral::Rot90.apply(&img)),
            Dihedral::Rot180.apply(&img)
        );
        for t in Dihedral::ALL {
            assert_eq!(t.inverse().apply(&t.apply(&img)), img, "{t:?}");
        }
        assert_eq!(Dihedral::Identity.apply(&img), img);
    }

    #[test]
    fn rot90_is_counter_clockwise() {
        let img = card(5, 3);
        let r = Dihedral::Rot90.apply(&img);
        assert_eq!((r.width(), r.height()), (3, 5));
        // top-right corner moves to the top-left
        assert_eq!(r.pixel(0, 0), img.pixel(4, 0));
        assert_eq!(r.pixel(0, 4), img.pixel(0, 0));
    }

    #[test]
    fn all_elements_distinct() {
        let img = card(4, 4);
        let images: Vec<Image> = Dihedral::ALL.iter().map(|t| t.apply(&img)).collect();
        for i in 0..8 {
            for j in i + 1..8 {
                assert_ne!(images[i], images[j]);
            }
        }
    }
}
