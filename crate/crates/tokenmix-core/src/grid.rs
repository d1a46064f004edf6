//! Geometry primitives: the pixel/token layout, dense images, patchified
//! images, and binary token masks with their algebra.
//!
//! Conventions (fixed so file formats and tests are unambiguous):
//! - token order is row-major (row index major, column index minor);
//! - a patch vector is flattened channel-major, then pixel-row-major;
//! - pixel values are real in a nominal `[0, 1]` range, never quantized
//!   inside the pipeline.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Geometry binding an image to its token grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatchLayout {
    pub image_h: usize,
    pub image_w: usize,
    pub channels: usize,
    pub patch_size: usize,
    pub grid_h: usize,
    pub grid_w: usize,
}

impl PatchLayout {
    /// Builds a layout; image sides must be positive multiples of `patch_size`.
    pub fn new(image_h: usize, image_w: usize, channels: usize, patch_size: usize) -> Result<Self> {
        if image_h == 0 || image_w == 0 || channels == 0 || patch_size == 0 {
            return Err(Error::InvalidLayout(format!(
                "all fields must be positive: {}x{}x{}, patch {}",
                channels, image_h, image_w, patch_size
            )));
        }
        if image_h % patch_size != 0 || image_w % patch_size != 0 {
            return Err(Error::InvalidLayout(format!(
                "image {}x{} not divisible by patch size {}",
                image_h, image_w, patch_size
            )));
        }
        Ok(Self {
            image_h,
            image_w,
            channels,
            patch_size,
            grid_h: image_h / patch_size,
            grid_w: image_w / patch_size,
        })
    }

    /// Number of tokens in the grid.
    pub fn num_tokens(&self) -> usize {
        self.grid_h * self.grid_w
    }

    /// Length of one flattened patch vector.
    pub fn patch_dim(&self) -> usize {
        self.patch_size * self.patch_size * self.channels
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.grid_h, self.grid_w)
    }
}

/// Dense pixel image, stored planar: channel-major, then row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::DimensionMismatch {
                expected: (channels, height, width),
                got: (data.len(), 1, 1),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { channels, height, width, data })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Self { channels, height, width, data: vec![0.0; channels * height * width] }
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn matches(&self, layout: &PatchLayout) -> bool {
        self.channels == layout.channels && self.height == layout.image_h && self.width == layout.image_w
    }
}

/// Image re-arranged as a row-major grid of flattened patch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchImage {
    pub layout: PatchLayout,
    /// `num_tokens * patch_dim` values, token-major.
    tokens: Vec<f64>,
}

impl PatchImage {
    pub fn from_tokens(layout: PatchLayout, tokens: Vec<f64>) -> Result<Self> {
        if tokens.len() != layout.num_tokens() * layout.patch_dim() {
            return Err(Error::DimensionMismatch {
                expected: (layout.num_tokens(), layout.patch_dim(), 1),
                got: (tokens.len(), 1, 1),
            });
        }
        Ok(Self { layout, tokens })
    }

    #[inline]
    pub fn token(&self, idx: usize) -> &[f64] {
        let d = self.layout.patch_dim();
        &self.tokens[idx * d..(idx + 1) * d]
    }

    #[inline]
    pub fn token_mut(&mut self, idx: usize) -> &mut [f64] {
        let d = self.layout.patch_dim();
        &mut self.tokens[idx * d..(idx + 1) * d]
    }

    pub fn tokens_flat(&self) -> &[f64] {
        &self.tokens
    }
}

/// Rearranges an image into non-overlapping patch vectors.
///
/// Token `(r, c)` holds the pixel rectangle `[rP, (r+1)P) x [cP, (c+1)P)`,
/// flattened channel-major then pixel-row-major.
pub fn patchify(img: &Image, layout: &PatchLayout) -> Result<PatchImage> {
    if !img.matches(layout) {
        return Err(Error::DimensionMismatch {
            expected: (layout.channels, layout.image_h, layout.image_w),
            got: (img.channels, img.height, img.width),
        });
    }
    let p = layout.patch_size;
    let mut tokens = Vec::with_capacity(layout.num_tokens() * layout.patch_dim());
    for r in 0..layout.grid_h {
        for c in 0..layout.grid_w {
            for ch in 0..layout.channels {
                for py in 0..p {
                    let y = r * p + py;
                    for px in 0..p {
                        tokens.push(img.get(ch, y, c * p + px));
                    }
                }
            }
        }
    }
    Ok(PatchImage { layout: *layout, tokens })
}

/// Exact inverse of [`patchify`].
pub fn unpatchify(patches: &PatchImage) -> Image {
    let layout = &patches.layout;
    let p = layout.patch_size;
    let mut img = Image::zeros(layout.channels, layout.image_h, layout.image_w);
    for r in 0..layout.grid_h {
        for c in 0..layout.grid_w {
            let tok = patches.token(r * layout.grid_w + c);
            let mut i = 0;
            for ch in 0..layout.channels {
                for py in 0..p {
                    for px in 0..p {
                        img.set(ch, r * p + py, c * p + px, tok[i]);
                        i += 1;
                    }
                }
            }
        }
    }
    img
}

/// Binary occupancy grid over tokens. Set bits mark tokens kept from
/// image `a` in a mix; the set-bit count is cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenMask {
    pub grid_h: usize,
    pub grid_w: usize,
    words: Vec<u64>,
    count: usize,
}

impl TokenMask {
    pub fn empty(grid_h: usize, grid_w: usize) -> Self {
        let n = grid_h * grid_w;
        Self { grid_h, grid_w, words: vec![0; n.div_ceil(64)], count: 0 }
    }

    pub fn full(grid_h: usize, grid_w: usize) -> Self {
        let mut m = Self::empty(grid_h, grid_w);
        for i in 0..grid_h * grid_w {
            m.set(i, true);
        }
        m
    }

    pub fn from_indices(grid_h: usize, grid_w: usize, indices: &[usize]) -> Self {
        let mut m = Self::empty(grid_h, grid_w);
        for &i in indices {
            m.set(i, true);
        }
        m
    }

    pub fn num_tokens(&self) -> usize {
        self.grid_h * self.grid_w
    }

    /// Number of set bits.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn coverage(&self) -> f64 {
        self.count as f64 / self.num_tokens() as f64
    }

    #[inline]
    pub fn get(&self, idx: usize) -> bool {
        debug_assert!(idx < self.num_tokens());
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub fn get_rc(&self, r: usize, c: usize) -> bool {
        self.get(r * self.grid_w + c)
    }

    #[inline]
    pub fn set(&mut self, idx: usize, value: bool) {
        debug_assert!(idx < self.num_tokens());
        let w = &mut self.words[idx / 64];
        let bit = 1u64 << (idx % 64);
        let was = *w & bit != 0;
        if value && !was {
            *w |= bit;
            self.count += 1;
        } else if !value && was {
            *w &= !bit;
            self.count -= 1;
        }
    }

    /// Sets every bit of the `h x w` rectangle at `(top, left)`; returns the
    /// indices that were newly set (overlaps with existing bits add nothing).
    pub fn set_rect(&mut self, top: usize, left: usize, h: usize, w: usize) -> Vec<usize> {
        let mut new_bits = Vec::new();
        for r in top..top + h {
            for c in left..left + w {
                let idx = r * self.grid_w + c;
                if !self.get(idx) {
                    self.set(idx, true);
                    new_bits.push(idx);
                }
            }
        }
        new_bits
    }

    pub fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_tokens()).filter(move |&i| self.get(i))
    }

    pub fn same_grid(&self, other: &TokenMask) -> bool {
        self.grid_h == other.grid_h && self.grid_w == other.grid_w
    }
}

/// Bitwise complement over the same grid.
pub fn mask_complement(m: &TokenMask) -> TokenMask {
    let mut out = TokenMask::empty(m.grid_h, m.grid_w);
    for i in 0..m.num_tokens() {
        out.set(i, !m.get(i));
    }
    out
}

/// Summary statistics of a mask's set bits.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskStats {
    pub count: usize,
    pub coverage: f64,
    /// Number of 4-connected components of set bits.
    pub components: usize,
    /// Component sizes in discovery order (row-major scan).
    pub component_sizes: Vec<usize>,
}

/// Counts 4-connected components of the set bits by flood fill.
pub fn mask_stats(m: &TokenMask) -> MaskStats {
    let n = m.num_tokens();
    let mut visited = vec![false; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if !m.get(start) || visited[start] {
            continue;
        }
        let mut size = 0usize;
        stack.push(start);
        visited[start] = true;
        while let Some(idx) = stack.pop() {
            size += 1;
            let (r, c) = (idx / m.grid_w, idx % m.grid_w);
            let mut push = |r2: usize, c2: usize| {
                let j = r2 * m.grid_w + c2;
                if m.get(j) && !visited[j] {
                    visited[j] = true;
                    stack.push(j);
                }
            };
            if r > 0 {
                push(r - 1, c);
            }
            if r + 1 < m.grid_h {
                push(r + 1, c);
            }
            if c > 0 {
                push(r, c - 1);
            }
            if c + 1 < m.grid_w {
                push(r, c + 1);
            }
        }
        sizes.push(size);
    }
    MaskStats {
        count: m.count(),
        coverage: m.coverage(),
        components: sizes.len(),
        component_sizes: sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_image(h: usize, w: usize) -> Image {
        let data: Vec<f64> = (0..h * w).map(|i| i as f64).collect();
        Image::new(1, h, w, data).unwrap()
    }

    #[test]
    fn patchify_4x4_pixel_ramp() {
        // pixel (i, j) = 4i + j, P = 2
        let img = ramp_image(4, 4);
        let layout = PatchLayout::new(4, 4, 1, 2).unwrap();
        let p = patchify(&img, &layout).unwrap();
        assert_eq!(p.token(0), &[0.0, 1.0, 4.0, 5.0]);
        assert_eq!(p.token(1), &[2.0, 3.0, 6.0, 7.0]);
        assert_eq!(p.token(2), &[8.0, 9.0, 12.0, 13.0]);
        assert_eq!(p.token(3), &[10.0, 11.0, 14.0, 15.0]);
    }

    #[test]
    fn patchify_single_token_is_flatten() {
        let img = ramp_image(4, 4);
        let layout = PatchLayout::new(4, 4, 1, 4).unwrap();
        let p = patchify(&img, &layout).unwrap();
        assert_eq!(p.layout.num_tokens(), 1);
        assert_eq!(p.token(0), img.data());
        let back = unpatchify(&p);
        assert_eq!(back, img);
    }

    #[test]
    fn patchify_rejects_dimension_mismatch() {
        let img = ramp_image(4, 4);
        let layout = PatchLayout::new(8, 8, 1, 2).unwrap();
        assert!(matches!(patchify(&img, &layout), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn layout_rejects_indivisible_sides() {
        assert!(PatchLayout::new(10, 8, 3, 4).is_err());
        assert!(PatchLayout::new(8, 8, 3, 0).is_err());
    }

    #[test]
    fn unpatchify_zero_is_zero() {
        let layout = PatchLayout::new(6, 6, 2, 3).unwrap();
        let p = PatchImage::from_tokens(layout, vec![0.0; layout.num_tokens() * layout.patch_dim()]).unwrap();
        let img = unpatchify(&p);
        assert!(img.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn complement_involution_and_counts() {
        let mut m = TokenMask::empty(14, 14);
        for i in 0..98 {
            m.set(i * 2, true);
        }
        assert_eq!(m.count(), 98);
        let inv = mask_complement(&m);
        assert_eq!(inv.count(), 196 - 98);
        assert_eq!(mask_complement(&inv), m);
        let empty = TokenMask::empty(3, 5);
        assert_eq!(mask_complement(&empty), TokenMask::full(3, 5));
    }

    #[test]
    fn stats_full_grid_single_component() {
        let s = mask_stats(&TokenMask::full(14, 14));
        assert_eq!(s.count, 196);
        assert_eq!(s.coverage, 1.0);
        assert_eq!(s.components, 1);
        assert_eq!(s.component_sizes, vec![196]);
    }

    #[test]
    fn stats_two_isolated_bits() {
        let m = TokenMask::from_indices(4, 4, &[0, 15]);
        let s = mask_stats(&m);
        assert_eq!(s.components, 2);
        assert_eq!(s.component_sizes, vec![1, 1]);
    }
}
