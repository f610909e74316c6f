//! Paired-image augmentation and synthesis toolkit for low-level vision.
//!
//! The crate is organised around an [`AlignedPair`]: a degraded input and its
//! clean target on the same pixel grid. Degradations ([`degrade`]) produce the
//! pairs, [`resample`] aligns super-resolution pairs onto the HR grid,
//! [`augment`] and [`moa`] produce network-ready [`AugmentedSample`]s, and
//! [`metrics`] implements PSNR/SSIM evaluation. [`pipeline`] ties everything
//! into reproducible on-disk runs.

pub mod augment;
pub mod degrade;
mod error;
pub mod metrics;
pub mod moa;
pub mod pipeline;
pub mod resample;
pub mod tensor;
pub mod testcard;

pub use augment::{AugRecord, AugmentedSample, RectMask};
pub use error::{Error, Result};
pub use moa::{Method, MoaPolicy};
pub use tensor::{AlignedPair, Image, LossMask, Rng, derive_item_seed};
