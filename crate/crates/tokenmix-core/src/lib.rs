//! Token-level image mixing with activation-map soft targets, plus the
//! desk-scale machinery needed to exercise it end to end: deterministic
//! mask samplers, a procedural shape dataset, a toy CNN teacher, a tiny
//! vision transformer with hand-rolled gradients, and occlusion evaluation.
//!
//! The crate is `no_std` (alloc only); all IO, file formats, and the CLI
//! live in the companion `tokenmix-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dist;
pub mod error;
pub mod eval;
pub mod grid;
pub mod linalg;
pub mod loss;
pub mod mix;
pub mod rng;
pub mod sampler;
pub mod synth;
pub mod target;
pub mod teacher;
pub mod train;
pub mod vit;

pub use error::Error;
pub use grid::{mask_complement, mask_stats, patchify, unpatchify};
pub use grid::{Image, MaskStats, PatchImage, PatchLayout, TokenMask};
pub use mix::{cutmix, mixup, token_mix, MixRecipe, MixStrategy};
pub use rng::{Purpose, RngStream};
pub use sampler::{
    sample_block_mask, sample_lambda, sample_random_mask, sample_region_mask, LambdaMode,
    MaskStrategy, SamplerConfig,
};
pub use target::{linear_target, normalize_map, resize_map, tokenmix_target, ActivationMap, SoftTarget};

/// Floating-point scalar used by the model and trainer (`f32` or `f64`).
pub trait Scalar:
    num_traits::Float + num_traits::FromPrimitive + num_traits::ToPrimitive + core::fmt::Debug + Send + Sync + 'static
{
    fn from_f64(v: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(v).unwrap()
    }
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
