//! Token-mask samplers: block-based (unions of rectangles), uniformly
//! random single tokens, and the classic single-rectangle region cut,
//! plus mixing-ratio sampling.
//!
//! Orientation: set bits always mark tokens kept from image `a`, so every
//! strategy produces masks the mixer consumes identically. All samplers
//! hit their target count exactly: `count == round(lambda * N)` (the
//! region sampler recomputes and returns its post-clipping ratio).

use alloc::vec::Vec;

use crate::dist::sample_beta_symmetric;
use crate::grid::{PatchLayout, TokenMask};
use crate::rng::RngStream;

/// Default aspect-ratio range for block placement, `(0.3, 1/0.3)`.
pub const DEFAULT_ASPECT_RANGE: (f64, f64) = (0.3, 1.0 / 0.3);

/// Reference minimum block size: 14 tokens on a 14x14 (196-token) grid.
pub const REFERENCE_MIN_BLOCK: f64 = 14.0 / 196.0;

/// Mask sampling strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskStrategy {
    /// One rectangle cut out of the grid (CutMix-style).
    Region,
    /// Independent single tokens.
    Random,
    /// Union of rectangles of at least `min_block_tokens` tokens each.
    Block,
}

/// How the mixing ratio is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    Fixed(f64),
    /// Symmetric Beta(alpha, alpha).
    Beta(f64),
}

/// Sampler configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub strategy: MaskStrategy,
    pub lambda_mode: LambdaMode,
    /// Minimum tokens per block placement; `None` auto-scales the paper's
    /// 14-token minimum proportionally to the grid: `max(1, round(14 N / 196))`.
    pub min_block_tokens: Option<usize>,
    pub aspect_range: (f64, f64),
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            strategy: MaskStrategy::Block,
            lambda_mode: LambdaMode::Fixed(0.5),
            min_block_tokens: None,
            aspect_range: DEFAULT_ASPECT_RANGE,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        let (lo, hi) = self.aspect_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(crate::Error::InvalidConfig(alloc::format!(
                "aspect range ({}, {}) must satisfy 0 < low <= high",
                lo, hi
            )));
        }
        if self.min_block_tokens == Some(0) {
            return Err(crate::Error::InvalidConfig("min_block_tokens must be >= 1".into()));
        }
        match self.lambda_mode {
            LambdaMode::Fixed(l) if !(0.0..=1.0).contains(&l) => {
                Err(crate::Error::InvalidConfig(alloc::format!("fixed lambda {} not in [0, 1]", l)))
            }
            LambdaMode::Beta(a) if !(a > 0.0 && a.is_finite()) => {
                Err(crate::Error::InvalidConfig(alloc::format!("beta alpha {} must be positive", a)))
            }
            _ => Ok(()),
        }
    }

    /// Effective minimum block size for a grid of `n` tokens.
    pub fn effective_min_block(&self, n: usize) -> usize {
        match self.min_block_tokens {
            Some(m) => m,
            None => (libm::round(REFERENCE_MIN_BLOCK * n as f64) as usize).max(1),
        }
    }
}

/// Target token count for a ratio: `round(lambda * N)`, ties away from zero.
pub fn target_count(lambda: f64, n: usize) -> usize {
    libm::round(lambda * n as f64) as usize
}

/// Draws a mixing ratio in `[0, 1]` according to the configured mode.
pub fn sample_lambda(cfg: &SamplerConfig, rng: &mut RngStream) -> f64 {
    match cfg.lambda_mode {
        LambdaMode::Fixed(l) => l,
        LambdaMode::Beta(alpha) => sample_beta_symmetric(rng, alpha),
    }
}

/// One proposed block placement: `h x w` rectangle at `(top, left)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPlacement {
    pub top: usize,
    pub left: usize,
    pub h: usize,
    pub w: usize,
}

/// Proposes a block: size uniform in `[min_block, max(min_block, remaining)]`,
/// aspect log-uniform in the configured range, dimensions rounded and
/// clamped to the grid. If rounding undershoots `min_block`, the wider
/// dimension is bumped up (within the grid) to restore the minimum.
pub fn propose_block(
    layout: &PatchLayout,
    remaining: usize,
    cfg: &SamplerConfig,
    rng: &mut RngStream,
) -> BlockPlacement {
    let min_block = cfg.effective_min_block(layout.num_tokens());
    let hi = remaining.max(min_block);
    let n = rng.next_range(min_block, hi) as f64;
    let (alo, ahi) = cfg.aspect_range;
    let aspect = libm::exp(rng.next_f64() * (libm::log(ahi) - libm::log(alo)) + libm::log(alo));
    let mut h = (libm::round(libm::sqrt(n * aspect)) as usize).clamp(1, layout.grid_h);
    let mut w = (libm::round(libm::sqrt(n / aspect)) as usize).clamp(1, layout.grid_w);
    while h * w < min_block && (h < layout.grid_h || w < layout.grid_w) {
        if w < layout.grid_w && (h >= layout.grid_h || w <= h) {
            w += 1;
        } else {
            h += 1;
        }
    }
    let top = rng.next_below(layout.grid_h - h + 1);
    let left = rng.next_below(layout.grid_w - w + 1);
    BlockPlacement { top, left, h, w }
}

/// Block-based mask: rectangles are unioned until the target count is
/// reached, then the overshoot is trimmed by clearing random bits set by
/// the final placement (falling back to any set bit).
pub fn sample_block_mask(
    layout: &PatchLayout,
    lambda: f64,
    cfg: &SamplerConfig,
    rng: &mut RngStream,
) -> TokenMask {
    let n = layout.num_tokens();
    let target = target_count(lambda, n);
    if target == 0 {
        return TokenMask::empty(layout.grid_h, layout.grid_w);
    }
    if target >= n {
        return TokenMask::full(layout.grid_h, layout.grid_w);
    }
    let mut mask = TokenMask::empty(layout.grid_h, layout.grid_w);
    let mut last_new: Vec<usize> = Vec::new();
    let mut stalls = 0usize;
    while mask.count() < target {
        let p = propose_block(layout, target - mask.count(), cfg, rng);
        let new_bits = mask.set_rect(p.top, p.left, p.h, p.w);
        if new_bits.is_empty() {
            // placement fell entirely on already-set bits
            stalls += 1;
            if stalls > 10_000 {
                // safety valve; unreachable in practice
                let missing: Vec<usize> = (0..n).filter(|&i| !mask.get(i)).collect();
                let k = target - mask.count();
                let mut rest = missing;
                for i in 0..k {
                    let j = rng.next_range(i, rest.len() - 1);
                    rest.swap(i, j);
                    mask.set(rest[i], true);
                }
                last_new.clear();
                break;
            }
        } else {
            stalls = 0;
            last_new = new_bits;
        }
    }
    let mut excess = mask.count().saturating_sub(target);
    if excess > 0 {
        let mut trim_pool = last_new;
        for i in 0..excess.min(trim_pool.len()) {
            let j = rng.next_range(i, trim_pool.len() - 1);
            trim_pool.swap(i, j);
            mask.set(trim_pool[i], false);
        }
        excess = mask.count() - target;
        if excess > 0 {
            let mut all_set: Vec<usize> = mask.iter_set().collect();
            for i in 0..excess {
                let j = rng.next_range(i, all_set.len() - 1);
                all_set.swap(i, j);
                mask.set(all_set[i], false);
            }
        }
    }
    debug_assert_eq!(mask.count(), target);
    mask
}

/// Random mask: exactly `round(lambda * N)` tokens drawn uniformly
/// without replacement.
pub fn sample_random_mask(layout: &PatchLayout, lambda: f64, rng: &mut RngStream) -> TokenMask {
    let n = layout.num_tokens();
    let target = target_count(lambda, n);
    let picks = rng.choose_k(n, target.min(n));
    TokenMask::from_indices(layout.grid_h, layout.grid_w, &picks)
}

/// Region mask: clears one axis-aligned rectangle with side lengths
/// `round(grid * sqrt(1 - lambda))`, centered at a uniformly drawn token
/// and clipped at the borders. Returns the mask together with the
/// recomputed kept fraction `count / N`.
pub fn sample_region_mask(
    layout: &PatchLayout,
    lambda: f64,
    rng: &mut RngStream,
) -> (TokenMask, f64) {
    let (gh, gw) = layout.grid();
    if lambda >= 1.0 {
        return (TokenMask::full(gh, gw), 1.0);
    }
    if lambda <= 0.0 {
        return (TokenMask::empty(gh, gw), 0.0);
    }
    let cut = libm::sqrt(1.0 - lambda);
    let rh = libm::round(gh as f64 * cut) as usize;
    let rw = libm::round(gw as f64 * cut) as usize;
    let mut mask = TokenMask::full(gh, gw);
    if rh > 0 && rw > 0 {
        let cy = rng.next_below(gh) as isize;
        let cx = rng.next_below(gw) as isize;
        let y0 = (cy - (rh / 2) as isize).max(0) as usize;
        let x0 = (cx - (rw / 2) as isize).max(0) as usize;
        let y1 = (cy - (rh / 2) as isize + rh as isize).min(gh as isize) as usize;
        let x1 = (cx - (rw / 2) as isize + rw as isize).min(gw as isize) as usize;
        for r in y0..y1 {
            for c in x0..x1 {
                mask.set(r * gw + c, false);
            }
        }
    }
    let actual = mask.count() as f64 / layout.num_tokens() as f64;
    (mask, actual)
}

/// Samples a mask with the configured strategy; returns the mask and the
/// ratio that downstream target computation should use (equal to `lambda`
/// except for the region strategy, which reports its clipped value).
pub fn sample_mask(
    layout: &PatchLayout,
    lambda: f64,
    cfg: &SamplerConfig,
    rng: &mut RngStream,
) -> (TokenMask, f64) {
    match cfg.strategy {
        MaskStrategy::Block => (sample_block_mask(layout, lambda, cfg, rng), lambda),
        MaskStrategy::Random => (sample_random_mask(layout, lambda, rng), lambda),
        MaskStrategy::Region => sample_region_mask(layout, lambda, rng),
    }
}
