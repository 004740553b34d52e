//! Binary masks, bounding boxes and the run-length codec.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary foreground mask over an `h x w` pixel grid.
///
/// Entries are 0 (background) or 1 (foreground), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mask {
    grid: Array2<u8>,
}

impl Mask {
    pub fn zeros(h: usize, w: usize) -> Self {
        Mask { grid: Array2::zeros((h, w)) }
    }

    /// Builds a mask from a predicate over (row, col).
    pub fn from_fn(h: usize, w: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Mask { grid: Array2::from_shape_fn((h, w), |(r, c)| u8::from(f(r, c))) }
    }

    /// Wraps an existing grid, normalizing nonzero entries to 1.
    pub fn from_grid(grid: Array2<u8>) -> Self {
        Mask { grid: grid.mapv(|v| u8::from(v != 0)) }
    }

    pub fn h(&self) -> usize {
        self.grid.nrows()
    }

    pub fn w(&self) -> usize {
        self.grid.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.h(), self.w())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.grid[(r, c)] != 0
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.grid[(r, c)] = u8::from(v);
    }

    pub fn grid(&self) -> &Array2<u8> {
        &self.grid
    }

    /// Number of foreground pixels.
    pub fn area(&self) -> usize {
        self.grid.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.iter().all(|&v| v == 0)
    }

    /// Foreground pixels shared with `other`.
    pub fn intersection_count(&self, other: &Mask) -> usize {
        self.grid
            .iter()
            .zip(other.grid.iter())
            .filter(|(&a, &b)| a != 0 && b != 0)
            .count()
    }

    /// Foreground pixels present in either mask.
    pub fn union_count(&self, other: &Mask) -> usize {
        self.grid
            .iter()
            .zip(other.grid.iter())
            .filter(|(&a, &b)| a != 0 || b != 0)
            .count()
    }

    /// In-place union with `other`.
    pub fn union_with(&mut self, other: &Mask) {
        for (a, &b) in self.grid.iter_mut().zip(other.grid.iter()) {
            if b != 0 {
                *a = 1;
            }
        }
    }

    /// Mask translated by (dr, dc); pixels shifted out of bounds are clipped.
    pub fn translated(&self, dr: isize, dc: isize) -> Mask {
        let (h, w) = self.shape();
        let mut out = Mask::zeros(h, w);
        for ((r, c), &v) in self.grid.indexed_iter() {
            if v == 0 {
                continue;
            }
            let nr = r as isize + dr;
            let nc = c as isize + dc;
            if nr >= 0 && nr < h as isize && nc >= 0 && nc < w as isize {
                out.grid[(nr as usize, nc as usize)] = 1;
            }
        }
        out
    }

    /// Tight bounding box of the foreground, or None for an empty mask.
    pub fn tight_bbox(&self) -> Option<BBox> {
        let mut r0 = usize::MAX;
        let mut r1 = 0usize;
        let mut c0 = usize::MAX;
        let mut c1 = 0usize;
        let mut any = false;
        for ((r, c), &v) in self.grid.indexed_iter() {
            if v != 0 {
                any = true;
                r0 = r0.min(r);
                r1 = r1.max(r);
                c0 = c0.min(c);
                c1 = c1.max(c);
            }
        }
        if !any {
            return None;
        }
        Some(BBox { x: c0, y: r0, w: c1 - c0 + 1, h: r1 - r0 + 1 })
    }
}

/// Axis-aligned box, (x, y) top-left in pixels, extents (w, h) >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BBox {
    /// Clamps the box to frame bounds, preserving at least one pixel.
    pub fn clamped(&self, frame_h: usize, frame_w: usize) -> Result<BBox> {
        if self.x >= frame_w || self.y >= frame_h || self.w == 0 || self.h == 0 {
            return Err(Error::InvalidProposal(format!(
                "bbox ({}, {}, {}, {}) lies outside a {}x{} frame",
                self.x, self.y, self.w, self.h, frame_h, frame_w
            )));
        }
        Ok(BBox {
            x: self.x,
            y: self.y,
            w: self.w.min(frame_w - self.x),
            h: self.h.min(frame_h - self.y),
        })
    }

    /// Expands the box by `margin` (fraction per side) and clamps to the frame.
    pub fn expanded(&self, margin: f64, frame_h: usize, frame_w: usize) -> BBox {
        let mx = (self.w as f64 * margin).round() as isize;
        let my = (self.h as f64 * margin).round() as isize;
        let x0 = (self.x as isize - mx).max(0) as usize;
        let y0 = (self.y as isize - my).max(0) as usize;
        let x1 = ((self.x + self.w) as isize + mx).min(frame_w as isize) as usize;
        let y1 = ((self.y + self.h) as isize + my).min(frame_h as isize) as usize;
        BBox { x: x0, y: y0, w: (x1 - x0).max(1), h: (y1 - y0).max(1) }
    }
}

/// Encodes a mask as space-separated run lengths, row-major, background run first.
///
/// The first run counts background pixels and may be 0; runs always sum to `h*w`.
pub fn rle_encode(mask: &Mask) -> String {
    let mut runs: Vec<usize> = Vec::new();
    let mut current: u8 = 0;
    let mut count: usize = 0;
    for &v in mask.grid().iter() {
        if v == current {
            count += 1;
        } else {
            runs.push(count);
            current = v;
            count = 1;
        }
    }
    runs.push(count);
    runs.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Decodes a run-length string produced by [`rle_encode`].
pub fn rle_decode(runs: &str, h: usize, w: usize) -> Result<Mask> {
    let mut counts: Vec<usize> = Vec::new();
    for tok in runs.split_whitespace() {
        let n: usize = tok
            .parse()
            .map_err(|_| Error::MalformedRle(format!("bad run token {tok:?}")))?;
        counts.push(n);
    }
    if counts.is_empty() {
        return Err(Error::MalformedRle("empty encoding".into()));
    }
    let total: usize = counts.iter().sum();
    if total != h * w {
        return Err(Error::MalformedRle(format!(
            "runs sum to {total}, expected {}x{} = {}",
            h,
            w,
            h * w
        )));
    }
    let mut flat = Vec::with_capacity(h * w);
    let mut value: u8 = 0;
    for count in counts {
        flat.extend(std::iter::repeat_n(value, count));
        value = 1 - value;
    }
    let grid = Array2::from_shape_vec((h, w), flat)
        .map_err(|e| Error::MalformedRle(e.to_string()))?;
    Ok(Mask { grid })
}
