//! Image container, loss masks, deterministic RNG and reshape primitives.

mod image;
mod mask;
mod reshape;
mod rng;

pub use image::{Image, quantize_u8};
pub use mask::LossMask;
pub use reshape::{desubpixel, subpixel};
pub use rng::{Rng, derive_item_seed, splitmix64};

use crate::error::{Error, Result};

/// A degraded input and its clean target on a common pixel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    pub input: Image,
    pub target: Image,
    /// Super-resolution factor the input was aligned from; 1 for
    /// same-resolution tasks.
    pub scale: usize,
    pub source_id: String,
}

impl AlignedPair {
    pub fn new(input: Image, target: Image, scale: usize, source_id: impl Into<String>) -> Result<Self> {
        input.ensure_same_shape(&target, "aligned pair")?;
        if scale == 0 {
            return Err(Error::Domain {
                name: "scale",
                value: 0.0,
            });
        }
        Ok(Self {
            input,
            target,
            scale,
            source_id: source_id.into(),
        })
    }

    pub fn width(&self) -> usize {
        self.target.width()
    }

    pub fn height(&self) -> usize {
        self.target.height()
    }

    pub fn channels(&self) -> usize {
        self.target.channels()
    }

    pub(crate) fn ensure_same_shape(&self, other: &AlignedPair) -> Result<()> {
        self.target.ensure_same_shape(&other.target, "partner pair")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, proptest};

    proptest! {
        #[test]
        fn desubpixel_round_trip_preserves_samples(
            s in 1usize..5, bw in 1usize..5, bh in 1usize..5, c in 1usize..4, seed in any::<u64>()
        ) {
            let mut rng = Rng::new(seed);
            let img = Image::from_fn(bw * s, bh * s, c, |_, _, _| rng.uniform());
            let folded = desubpixel(&img, s).unwrap();
            let mut a: Vec<f64> = img.data().to_vec();
            let mut b: Vec<f64> = folded.data().to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
            prop_assert_eq!(subpixel(&folded, s).unwrap(), img);
        }
    }

    #[test]
    fn pair_rejects_mismatched_shapes() {
        let a = Image::zeros(4, 4, 3);
        let b = Image::zeros(4, 5, 3);
        assert!(matches!(
            AlignedPair::new(a, b, 1, "x"),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
