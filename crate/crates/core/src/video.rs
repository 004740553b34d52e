//! Frame-level domain types: proposals, segmentation slot tensors, label maps
//! and whole-video samples.

use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{BBox, Mask};

/// Default length of the appearance descriptor attached to each proposal.
pub const DEFAULT_FEATURE_DIM: usize = 256;

/// Default number of persistent object-identity slots.
pub const DEFAULT_MAX_SLOTS: usize = 10;

/// One candidate object region in a single frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Proposal {
    pub mask: Mask,
    pub bbox: BBox,
    /// Appearance descriptor of fixed length (`feature.len() == D_f`).
    pub feature: Vec<f64>,
    /// Generator confidence in [0, 1]; proposals are ordered by this, descending.
    pub confidence: f64,
}

impl Proposal {
    /// Builds a proposal from a mask, deriving the tight bounding box.
    pub fn from_mask(mask: Mask, feature: Vec<f64>, confidence: f64) -> Result<Proposal> {
        let bbox = mask
            .tight_bbox()
            .ok_or_else(|| Error::InvalidProposal("empty proposal mask".into()))?;
        Ok(Proposal { mask, bbox, feature, confidence })
    }
}

/// One video frame: RGB image in [0,1] and a 2-channel optical flow field
/// in pixels/frame. Both share the spatial shape `(h, w)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Frame {
    /// `(h, w, 3)` in [0, 1].
    pub image: Array3<f64>,
    /// `(h, w, 2)`: channel 0 = u (columns), channel 1 = v (rows).
    pub flow: Array3<f64>,
}

impl Frame {
    pub fn h(&self) -> usize {
        self.image.shape()[0]
    }

    pub fn w(&self) -> usize {
        self.image.shape()[1]
    }

    pub fn validate(&self) -> Result<()> {
        let (ih, iw, ic) = (self.image.shape()[0], self.image.shape()[1], self.image.shape()[2]);
        let (fh, fw, fc) = (self.flow.shape()[0], self.flow.shape()[1], self.flow.shape()[2]);
        if ic != 3 || fc != 2 || ih != fh || iw != fw {
            return Err(Error::DimensionMismatch(format!(
                "frame image {ih}x{iw}x{ic} vs flow {fh}x{fw}x{fc}"
            )));
        }
        Ok(())
    }
}

/// Per-frame multi-slot segmentation tensor: `K_max` binary slot masks plus a
/// cursor counting proposals committed so far in the frame.
///
/// Slots are disjoint: at most one slot is set per pixel. Conflicts are
/// resolved at commit time, earlier-committed proposals keep contested pixels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegTensor {
    slots: Vec<Mask>,
    h: usize,
    w: usize,
    cursor: usize,
}

impl SegTensor {
    pub fn empty(h: usize, w: usize, k_max: usize) -> Self {
        SegTensor { slots: vec![Mask::zeros(h, w); k_max], h, w, cursor: 0 }
    }

    pub fn k_max(&self) -> usize {
        self.slots.len()
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Slot masks are 1-indexed externally; `slot` here is 1..=K_max.
    pub fn slot(&self, slot: usize) -> &Mask {
        &self.slots[slot - 1]
    }

    pub fn slot_occupied(&self, slot: usize) -> bool {
        !self.slots[slot - 1].is_empty()
    }

    /// Lowest-indexed empty slot (1-based), if any.
    pub fn first_empty_slot(&self) -> Option<usize> {
        (1..=self.k_max()).find(|&k| !self.slot_occupied(k))
    }

    /// True if some slot already owns this pixel.
    fn pixel_claimed(&self, r: usize, c: usize) -> bool {
        self.slots.iter().any(|s| s.get(r, c))
    }

    /// Commits a proposal mask to `slot` (1-based). Pixels already owned by an
    /// earlier commit are left untouched; the remaining pixels join the slot.
    /// Returns the mask of pixels actually claimed.
    pub fn commit(&mut self, slot: usize, mask: &Mask) -> Mask {
        assert!(slot >= 1 && slot <= self.k_max(), "slot {slot} out of range");
        let mut claimed = Mask::zeros(self.h, self.w);
        for r in 0..self.h {
            for c in 0..self.w {
                if mask.get(r, c) && !self.pixel_claimed(r, c) {
                    claimed.set(r, c, true);
                }
            }
        }
        self.slots[slot - 1].union_with(&claimed);
        self.cursor += 1;
        claimed
    }

    /// The mask a slot would hold if `mask` were committed to it now.
    pub fn preview_commit(&self, slot: usize, mask: &Mask) -> Mask {
        let mut preview = self.slots[slot - 1].clone();
        for r in 0..self.h {
            for c in 0..self.w {
                if mask.get(r, c) && !self.pixel_claimed(r, c) {
                    preview.set(r, c, true);
                }
            }
        }
        preview
    }

    /// Verifies slot disjointness.
    pub fn check_disjoint(&self) -> Result<()> {
        for r in 0..self.h {
            for c in 0..self.w {
                let mut owner: Option<usize> = None;
                for (i, s) in self.slots.iter().enumerate() {
                    if s.get(r, c) {
                        if let Some(prev) = owner {
                            return Err(Error::DisjointnessViolation {
                                row: r,
                                col: c,
                                a: prev + 1,
                                b: i + 1,
                            });
                        }
                        owner = Some(i);
                    }
                }
            }
        }
        Ok(())
    }

    /// Test/construction helper: overwrite a slot mask wholesale.
    pub fn set_slot(&mut self, slot: usize, mask: Mask) {
        assert_eq!(mask.shape(), (self.h, self.w));
        self.slots[slot - 1] = mask;
    }
}

/// 2D projection of a slot tensor: labels in `{0, ..., K_max}`, 0 = background.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    labels: Array2<u8>,
}

impl LabelMap {
    pub fn zeros(h: usize, w: usize) -> Self {
        LabelMap { labels: Array2::zeros((h, w)) }
    }

    pub fn from_grid(labels: Array2<u8>) -> Self {
        LabelMap { labels }
    }

    pub fn h(&self) -> usize {
        self.labels.nrows()
    }

    pub fn w(&self) -> usize {
        self.labels.ncols()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.labels[(r, c)]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.labels[(r, c)] = v;
    }

    pub fn grid(&self) -> &Array2<u8> {
        &self.labels
    }

    /// Binary mask of one label value.
    pub fn mask_of(&self, label: u8) -> Mask {
        Mask::from_fn(self.h(), self.w(), |r, c| self.labels[(r, c)] == label)
    }

    /// Sorted list of nonzero labels present in the map.
    pub fn instance_ids(&self) -> Vec<u8> {
        let mut seen = [false; 256];
        for &v in self.labels.iter() {
            seen[v as usize] = true;
        }
        (1..256).filter(|&i| seen[i]).map(|i| i as u8).collect()
    }
}

/// Projects a slot tensor to a 2D label map. Pixel gets `k` if slot `k` is
/// set, else 0; requires slot disjointness (checked).
pub fn project_to_labelmap(seg: &SegTensor) -> Result<LabelMap> {
    seg.check_disjoint()?;
    let mut out = LabelMap::zeros(seg.h(), seg.w());
    for k in 1..=seg.k_max() {
        let m = seg.slot(k);
        for r in 0..seg.h() {
            for c in 0..seg.w() {
                if m.get(r, c) {
                    out.set(r, c, k as u8);
                }
            }
        }
    }
    Ok(out)
}

/// A whole video: frames, per-frame proposal lists (descending confidence)
/// and optional ground-truth label maps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VideoSample {
    pub name: String,
    pub frames: Vec<Frame>,
    pub proposals: Vec<Vec<Proposal>>,
    pub gt: Option<Vec<LabelMap>>,
}

impl VideoSample {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn h(&self) -> usize {
        self.frames[0].h()
    }

    pub fn w(&self) -> usize {
        self.frames[0].w()
    }

    /// Checks the cross-sequence invariants: equal lengths, confidence order.
    pub fn validate(&self) -> Result<()> {
        if self.proposals.len() != self.frames.len() {
            return Err(Error::Alignment(format!(
                "{}: {} frames but {} proposal lists",
                self.name,
                self.frames.len(),
                self.proposals.len()
            )));
        }
        if let Some(gt) = &self.gt {
            if gt.len() != self.frames.len() {
                return Err(Error::Alignment(format!(
                    "{}: {} frames but {} annotations",
                    self.name,
                    self.frames.len(),
                    gt.len()
                )));
            }
        }
        for frame in &self.frames {
            frame.validate()?;
        }
        for props in &self.proposals {
            for pair in props.windows(2) {
                if pair[0].confidence < pair[1].confidence {
                    return Err(Error::InvalidProposal(format!(
                        "{}: proposals not sorted by descending confidence",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Truncates the video to at most `max_frames` frames.
    pub fn truncated(mut self, max_frames: usize) -> VideoSample {
        if self.frames.len() > max_frames {
            self.frames.truncate(max_frames);
            self.proposals.truncate(max_frames);
            if let Some(gt) = &mut self.gt {
                gt.truncate(max_frames);
            }
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_empty_tensor() {
        let seg = SegTensor::empty(4, 4, 3);
        let lm = project_to_labelmap(&seg).unwrap();
        assert_eq!(lm, LabelMap::zeros(4, 4));
    }

    #[test]
    fn project_single_pixel_slot3() {
        let mut seg = SegTensor::empty(4, 4, 5);
        let m = Mask::from_fn(4, 4, |r, c| r == 1 && c == 2);
        seg.commit(3, &m);
        let lm = project_to_labelmap(&seg).unwrap();
        assert_eq!(lm.get(1, 2), 3);
        assert_eq!(lm.grid().iter().filter(|&&v| v != 0).count(), 1);
    }

    #[test]
    fn project_two_disjoint_slots_matches_bruteforce() {
        let a = Mask::from_fn(6, 6, |r, c| r < 3 && c < 3);
        let b = Mask::from_fn(6, 6, |r, c| r >= 3 && c >= 3);
        let mut seg = SegTensor::empty(6, 6, 4);
        seg.commit(1, &a);
        seg.commit(2, &b);
        let lm = project_to_labelmap(&seg).unwrap();
        // brute-force per-pixel check
        for r in 0..6 {
            for c in 0..6 {
                let expect = if a.get(r, c) {
                    1
                } else if b.get(r, c) {
                    2
                } else {
                    0
                };
                assert_eq!(lm.get(r, c), expect, "pixel ({r},{c})");
            }
        }
    }

    #[test]
    fn project_rejects_overlap() {
        let mut seg = SegTensor::empty(4, 4, 3);
        let m = Mask::from_fn(4, 4, |r, _| r == 0);
        seg.set_slot(1, m.clone());
        seg.set_slot(2, m);
        assert!(matches!(
            project_to_labelmap(&seg),
            Err(Error::DisjointnessViolation { .. })
        ));
    }

    #[test]
    fn commit_earlier_wins() {
        let mut seg = SegTensor::empty(4, 4, 3);
        let a = Mask::from_fn(4, 4, |r, c| r < 2 && c < 2);
        let b = Mask::from_fn(4, 4, |r, c| r < 3 && c < 3);
        seg.commit(1, &a);
        seg.commit(2, &b);
        seg.check_disjoint().unwrap();
        // slot 1 keeps the contested 2x2 corner
        assert_eq!(seg.slot(1).area(), 4);
        assert_eq!(seg.slot(2).area(), 9 - 4);
        assert_eq!(seg.cursor(), 2);
    }

    #[test]
    fn projection_restricted_to_slot_equals_slot_mask() {
        let mut seg = SegTensor::empty(5, 5, 4);
        seg.commit(2, &Mask::from_fn(5, 5, |r, c| r == c));
        seg.commit(4, &Mask::from_fn(5, 5, |r, c| r + c == 4 && r != 2));
        let lm = project_to_labelmap(&seg).unwrap();
        for k in 1..=4 {
            assert_eq!(&lm.mask_of(k as u8), seg.slot(k), "slot {k}");
        }
    }
}
