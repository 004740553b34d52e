//! Region similarity J (IoU), boundary accuracy F, their mean J&F, and the
//! per-sequence benchmark statistics (mean / recall / decay).

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hungarian::assign_max;
use crate::mask::Mask;
use crate::video::LabelMap;

/// Scores for one object (or one frame mean): region J, boundary F, and
/// their arithmetic mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameScore {
    pub j: f64,
    pub f: f64,
    pub jf: f64,
}

impl FrameScore {
    pub fn new(j: f64, f: f64) -> Self {
        FrameScore { j, f, jf: (j + f) / 2.0 }
    }
}

/// Mean / recall / decay triple for one statistic of one sequence.
///
/// `recall` for a single sequence is the 0/1 indicator `mean > 0.5`;
/// averaging over sequences yields the dataset-level recall fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceStats {
    pub mean: f64,
    pub recall: f64,
    pub decay: f64,
}

/// Intersection-over-union of two same-shape masks. Defined as 1.0 when both
/// masks are empty.
pub fn iou(a: &Mask, b: &Mask) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "iou: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let inter = a.intersection_count(b);
    let union = a.union_count(b);
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

/// Boundary pixels: foreground pixels with a 4-neighbor background pixel or
/// lying on the image border.
pub fn boundary_mask(m: &Mask) -> Mask {
    let (h, w) = m.shape();
    Mask::from_fn(h, w, |r, c| {
        if !m.get(r, c) {
            return false;
        }
        if r == 0 || r + 1 == h || c == 0 || c + 1 == w {
            return true;
        }
        !m.get(r - 1, c) || !m.get(r + 1, c) || !m.get(r, c - 1) || !m.get(r, c + 1)
    })
}

/// Boundary F-measure 2PR/(P+R). A boundary pixel matches if a counterpart
/// boundary pixel lies within Euclidean distance `tol` (disk dilation).
/// 1.0 if both boundaries are empty, 0.0 if exactly one is.
pub fn boundary_f(pred: &Mask, gt: &Mask, tol: f64) -> Result<f64> {
    if pred.shape() != gt.shape() {
        return Err(Error::DimensionMismatch(format!(
            "boundary_f: {:?} vs {:?}",
            pred.shape(),
            gt.shape()
        )));
    }
    let pb = boundary_mask(pred);
    let gb = boundary_mask(gt);
    let np = pb.area();
    let ng = gb.area();
    if np == 0 && ng == 0 {
        return Ok(1.0);
    }
    if np == 0 || ng == 0 {
        return Ok(0.0);
    }

    let offsets = disk_offsets(tol);
    let gb_dilated = dilate(&gb, &offsets);
    let pb_dilated = dilate(&pb, &offsets);

    let matched_pred = pb.intersection_count(&gb_dilated);
    let matched_gt = gb.intersection_count(&pb_dilated);

    let precision = matched_pred as f64 / np as f64;
    let recall = matched_gt as f64 / ng as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

/// Standard boundary tolerance: 0.008 of the image diagonal, at least 1 px.
pub fn default_boundary_tol(h: usize, w: usize) -> f64 {
    let diag = ((h * h + w * w) as f64).sqrt();
    (0.008 * diag).round().max(1.0)
}

fn disk_offsets(tol: f64) -> Vec<(isize, isize)> {
    let r = tol.floor() as isize;
    let t2 = tol * tol;
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            if (dr * dr + dc * dc) as f64 <= t2 {
                out.push((dr, dc));
            }
        }
    }
    out
}

fn dilate(m: &Mask, offsets: &[(isize, isize)]) -> Mask {
    let (h, w) = m.shape();
    let mut out = Mask::zeros(h, w);
    for r in 0..h {
        for c in 0..w {
            if !m.get(r, c) {
                continue;
            }
            for &(dr, dc) in offsets {
                let nr = r as isize + dr;
                let nc = c as isize + dc;
                if nr >= 0 && nr < h as isize && nc >= 0 && nc < w as isize {
                    out.set(nr as usize, nc as usize, true);
                }
            }
        }
    }
    out
}

/// Identifies whose score a per-object entry is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoredObject {
    /// A ground-truth instance id (matched or missed).
    GtInstance(u8),
    /// A predicted slot with no ground-truth counterpart (hallucination).
    ExtraSlot(u8),
}

/// Result of scoring one frame: per-object scores and their mean.
#[derive(Debug, Clone)]
pub struct FrameJf {
    pub per_object: Vec<(ScoredObject, FrameScore)>,
    pub mean: FrameScore,
}

/// Scores one frame under a fixed slot -> gt-instance matching.
///
/// `gt_ids` is the instance universe of the video; instances absent in this
/// frame contribute only when their matched slot predicts pixels anyway.
/// Unmatched predicted slots with nonempty masks score 0 against an empty
/// ground truth. The mean runs over all contributing objects; a frame with
/// nothing to score (empty gt, empty prediction) scores 1.0.
pub fn frame_jf(
    pred: &LabelMap,
    gt: &LabelMap,
    matching: &BTreeMap<u8, u8>,
    gt_ids: &[u8],
    tol: f64,
) -> Result<FrameJf> {
    if (pred.h(), pred.w()) != (gt.h(), gt.w()) {
        return Err(Error::DimensionMismatch(format!(
            "frame_jf: pred {}x{} vs gt {}x{}",
            pred.h(),
            pred.w(),
            gt.h(),
            gt.w()
        )));
    }
    // validate matching: injective, nonzero, targets within the universe
    let mut seen = std::collections::HashSet::new();
    for (&slot, &inst) in matching {
        if slot == 0 || inst == 0 {
            return Err(Error::InvalidMatching("slot/instance ids are 1-based".into()));
        }
        if !gt_ids.contains(&inst) {
            return Err(Error::InvalidMatching(format!(
                "slot {slot} mapped to nonexistent instance {inst}"
            )));
        }
        if !seen.insert(inst) {
            return Err(Error::InvalidMatching(format!(
                "instance {inst} matched more than once"
            )));
        }
    }

    let slot_of: BTreeMap<u8, u8> = matching.iter().map(|(&s, &i)| (i, s)).collect();
    let mut per_object = Vec::new();

    for &inst in gt_ids {
        let gt_mask = gt.mask_of(inst);
        let pred_mask = slot_of
            .get(&inst)
            .map(|&s| pred.mask_of(s))
            .unwrap_or_else(|| Mask::zeros(pred.h(), pred.w()));
        if gt_mask.is_empty() && pred_mask.is_empty() {
            continue;
        }
        let j = iou(&pred_mask, &gt_mask)?;
        let f = boundary_f(&pred_mask, &gt_mask, tol)?;
        per_object.push((ScoredObject::GtInstance(inst), FrameScore::new(j, f)));
    }

    // hallucinated slots: present in the prediction, absent from the matching
    for slot in pred.instance_ids() {
        if !matching.contains_key(&slot) {
            per_object.push((ScoredObject::ExtraSlot(slot), FrameScore::new(0.0, 0.0)));
        }
    }

    let mean = if per_object.is_empty() {
        FrameScore::new(1.0, 1.0)
    } else {
        let n = per_object.len() as f64;
        let j = per_object.iter().map(|(_, s)| s.j).sum::<f64>() / n;
        let f = per_object.iter().map(|(_, s)| s.f).sum::<f64>() / n;
        FrameScore::new(j, f)
    };
    Ok(FrameJf { per_object, mean })
}

/// Mean and first-vs-last temporal quartile decay of a per-frame score list.
pub fn sequence_stats(per_frame: &[f64]) -> Result<SequenceStats> {
    if per_frame.is_empty() {
        return Err(Error::EmptyInput("sequence_stats needs at least one frame".into()));
    }
    let n = per_frame.len();
    let mean = per_frame.iter().sum::<f64>() / n as f64;
    let q = n.div_ceil(4);
    let first = per_frame[..q].iter().sum::<f64>() / q as f64;
    let last = per_frame[n - q..].iter().sum::<f64>() / q as f64;
    Ok(SequenceStats {
        mean,
        recall: if mean > 0.5 { 1.0 } else { 0.0 },
        decay: first - last,
    })
}

/// Averages per-sequence stats into dataset-level stats; `recall` becomes the
/// fraction of sequences whose mean exceeds 0.5.
pub fn aggregate_stats(per_sequence: &[SequenceStats]) -> Result<SequenceStats> {
    if per_sequence.is_empty() {
        return Err(Error::EmptyInput("no sequences to aggregate".into()));
    }
    let n = per_sequence.len() as f64;
    Ok(SequenceStats {
        mean: per_sequence.iter().map(|s| s.mean).sum::<f64>() / n,
        recall: per_sequence.iter().map(|s| s.recall).sum::<f64>() / n,
        decay: per_sequence.iter().map(|s| s.decay).sum::<f64>() / n,
    })
}

/// Sequence-level tube IoU between every predicted slot and every gt
/// instance: summed intersections over summed unions across frames.
pub fn tube_iou_matrix(
    pred: &[LabelMap],
    gt: &[LabelMap],
) -> Result<(Vec<u8>, Vec<u8>, Array2<f64>)> {
    if pred.len() != gt.len() {
        return Err(Error::Alignment(format!(
            "tube_iou: {} predicted frames vs {} gt frames",
            pred.len(),
            gt.len()
        )));
    }
    let mut slot_ids: Vec<u8> = Vec::new();
    let mut inst_ids: Vec<u8> = Vec::new();
    for lm in pred {
        for id in lm.instance_ids() {
            if !slot_ids.contains(&id) {
                slot_ids.push(id);
            }
        }
    }
    for lm in gt {
        for id in lm.instance_ids() {
            if !inst_ids.contains(&id) {
                inst_ids.push(id);
            }
        }
    }
    slot_ids.sort_unstable();
    inst_ids.sort_unstable();

    let mut inter = Array2::<f64>::zeros((slot_ids.len(), inst_ids.len()));
    let mut union = Array2::<f64>::zeros((slot_ids.len(), inst_ids.len()));
    for (p, g) in pred.iter().zip(gt.iter()) {
        if (p.h(), p.w()) != (g.h(), g.w()) {
            return Err(Error::DimensionMismatch("tube_iou frame shapes differ".into()));
        }
        for (si, &s) in slot_ids.iter().enumerate() {
            let pm = p.mask_of(s);
            for (ii, &i) in inst_ids.iter().enumerate() {
                let gm = g.mask_of(i);
                inter[(si, ii)] += pm.intersection_count(&gm) as f64;
                union[(si, ii)] += pm.union_count(&gm) as f64;
            }
        }
    }
    let mut m = Array2::<f64>::zeros((slot_ids.len(), inst_ids.len()));
    for si in 0..slot_ids.len() {
        for ii in 0..inst_ids.len() {
            m[(si, ii)] = if union[(si, ii)] > 0.0 {
                inter[(si, ii)] / union[(si, ii)]
            } else {
                0.0
            };
        }
    }
    Ok((slot_ids, inst_ids, m))
}

/// Optimal whole-video slot -> instance matching maximizing summed tube IoU.
/// Pairs with zero overlap are dropped (they are not real correspondences).
pub fn video_matching(pred: &[LabelMap], gt: &[LabelMap]) -> Result<BTreeMap<u8, u8>> {
    let (slot_ids, inst_ids, m) = tube_iou_matrix(pred, gt)?;
    if slot_ids.is_empty() || inst_ids.is_empty() {
        return Ok(BTreeMap::new());
    }
    let assignment = assign_max(&m);
    let mut out = BTreeMap::new();
    for (si, col) in assignment.into_iter().enumerate() {
        if let Some(ii) = col {
            if m[(si, ii)] > 0.0 {
                out.insert(slot_ids[si], inst_ids[ii]);
            }
        }
    }
    Ok(out)
}

/// Full evaluation of one predicted sequence against its ground truth.
#[derive(Debug, Clone)]
pub struct VideoEval {
    pub matching: BTreeMap<u8, u8>,
    pub per_frame: Vec<FrameScore>,
    pub j: SequenceStats,
    pub f: SequenceStats,
    pub jf: SequenceStats,
}

/// Evaluates a predicted label-map sequence under whole-video Hungarian
/// matching; per-frame rewards for RL reuse `per_frame`.
pub fn evaluate_video(pred: &[LabelMap], gt: &[LabelMap]) -> Result<VideoEval> {
    if pred.is_empty() {
        return Err(Error::EmptyInput("evaluate_video: no frames".into()));
    }
    let matching = video_matching(pred, gt)?;
    let mut gt_ids: Vec<u8> = Vec::new();
    for lm in gt {
        for id in lm.instance_ids() {
            if !gt_ids.contains(&id) {
                gt_ids.push(id);
            }
        }
    }
    gt_ids.sort_unstable();
    let tol = default_boundary_tol(gt[0].h(), gt[0].w());
    let mut per_frame = Vec::with_capacity(pred.len());
    for (p, g) in pred.iter().zip(gt.iter()) {
        per_frame.push(frame_jf(p, g, &matching, &gt_ids, tol)?.mean);
    }
    let j = sequence_stats(&per_frame.iter().map(|s| s.j).collect::<Vec<_>>())?;
    let f = sequence_stats(&per_frame.iter().map(|s| s.f).collect::<Vec<_>>())?;
    let jf = sequence_stats(&per_frame.iter().map(|s| s.jf).collect::<Vec<_>>())?;
    Ok(VideoEval { matching, per_frame, j, f, jf })
}

/// One row of the benchmark report table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub jf: SequenceStats,
    pub j: SequenceStats,
    pub f: SequenceStats,
}

pub const REPORT_COLUMNS: &str =
    "J&F-Mean, J-Mean, J-Recall, J-Decay, F-Mean, F-Recall, F-Decay";

impl ReportRow {
    /// Values x100 in report column order.
    pub fn values(&self) -> [f64; 7] {
        [
            self.jf.mean * 100.0,
            self.j.mean * 100.0,
            self.j.recall * 100.0,
            self.j.decay * 100.0,
            self.f.mean * 100.0,
            self.f.recall * 100.0,
            self.f.decay * 100.0,
        ]
    }

    pub fn csv_line(&self) -> String {
        let v = self.values();
        format!(
            "{},{:.1},{:.1},{:.1},{:.1},{:.1},{:.1},{:.1}",
            self.name, v[0], v[1], v[2], v[3], v[4], v[5], v[6]
        )
    }
}

/// Renders rows as an aligned text table with the Table-1 column layout.
pub fn format_report(label: &str, rows: &[ReportRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:>9} {:>8} {:>9} {:>8} {:>8} {:>9} {:>8}\n",
        label, "J&F-Mean", "J-Mean", "J-Recall", "J-Decay", "F-Mean", "F-Recall", "F-Decay"
    ));
    for row in rows {
        let v = row.values();
        out.push_str(&format!(
            "{:<14} {:>9.1} {:>8.1} {:>9.1} {:>8.1} {:>8.1} {:>9.1} {:>8.1}\n",
            row.name, v[0], v[1], v[2], v[3], v[4], v[5], v[6]
        ));
    }
    out
}

pub fn report_csv(key_column: &str, rows: &[ReportRow]) -> String {
    let mut out = format!("{key_column},{}\n", REPORT_COLUMNS.replace(", ", ","));
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_mask(rng: &mut StdRng, h: usize, w: usize, density: f64) -> Mask {
        let mut m = Mask::zeros(h, w);
        for r in 0..h {
            for c in 0..w {
                m.set(r, c, rng.random::<f64>() < density);
            }
        }
        m
    }

    // independent O(hw) reference
    fn iou_reference(a: &Mask, b: &Mask) -> f64 {
        let mut inter = 0u64;
        let mut union = 0u64;
        for r in 0..a.h() {
            for c in 0..a.w() {
                let (x, y) = (a.get(r, c), b.get(r, c));
                if x && y {
                    inter += 1;
                }
                if x || y {
                    union += 1;
                }
            }
        }
        if union == 0 {
            1.0
        } else {
            inter as f64 / union as f64
        }
    }

    // independent O(B^2) reference for the boundary measure
    fn boundary_f_reference(pred: &Mask, gt: &Mask, tol: f64) -> f64 {
        let bp: Vec<(isize, isize)> = boundary_pixels(pred);
        let bg: Vec<(isize, isize)> = boundary_pixels(gt);
        if bp.is_empty() && bg.is_empty() {
            return 1.0;
        }
        if bp.is_empty() || bg.is_empty() {
            return 0.0;
        }
        let matched = |src: &[(isize, isize)], dst: &[(isize, isize)]| {
            src.iter()
                .filter(|&&(r, c)| {
                    dst.iter().any(|&(r2, c2)| {
                        let d2 = (r - r2) * (r - r2) + (c - c2) * (c - c2);
                        (d2 as f64) <= tol * tol
                    })
                })
                .count()
        };
        let p = matched(&bp, &bg) as f64 / bp.len() as f64;
        let r = matched(&bg, &bp) as f64 / bg.len() as f64;
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    fn boundary_pixels(m: &Mask) -> Vec<(isize, isize)> {
        let bm = boundary_mask(m);
        let mut out = Vec::new();
        for r in 0..m.h() {
            for c in 0..m.w() {
                if bm.get(r, c) {
                    out.push((r as isize, c as isize));
                }
            }
        }
        out
    }

    #[test]
    fn iou_identity_and_disjoint() {
        let a = Mask::from_fn(4, 4, |r, _| r < 2);
        let b = Mask::from_fn(4, 4, |r, _| r >= 2);
        assert_eq!(iou(&a, &a).unwrap(), 1.0);
        assert_eq!(iou(&a, &b).unwrap(), 0.0);
        assert_eq!(iou(&Mask::zeros(3, 3), &Mask::zeros(3, 3)).unwrap(), 1.0);
    }

    #[test]
    fn iou_hand_case_one_third() {
        // a = {(0,0),(0,1)}, b = {(0,1),(1,1)}: |∩|=1, |∪|=3
        let a = Mask::from_fn(2, 2, |r, c| r == 0 && (c == 0 || c == 1));
        let b = Mask::from_fn(2, 2, |r, c| c == 1 && (r == 0 || r == 1));
        let v = iou(&a, &b).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn iou_shape_mismatch_errors() {
        let a = Mask::zeros(2, 2);
        let b = Mask::zeros(3, 2);
        assert!(matches!(iou(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn iou_matches_reference_randomly() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let h = rng.random_range(1..=24);
            let w = rng.random_range(1..=24);
            let d: f64 = rng.random();
            let a = random_mask(&mut rng, h, w, d);
            let b = random_mask(&mut rng, h, w, d);
            assert_eq!(iou(&a, &b).unwrap(), iou_reference(&a, &b));
            // symmetry
            assert_eq!(iou(&a, &b).unwrap(), iou(&b, &a).unwrap());
        }
    }

    #[test]
    fn boundary_f_identity_and_empty() {
        let a = Mask::from_fn(8, 8, |r, c| (2..6).contains(&r) && (2..6).contains(&c));
        assert_eq!(boundary_f(&a, &a, 1.0).unwrap(), 1.0);
        assert_eq!(boundary_f(&Mask::zeros(8, 8), &a, 2.0).unwrap(), 0.0);
        assert_eq!(
            boundary_f(&Mask::zeros(8, 8), &Mask::zeros(8, 8), 2.0).unwrap(),
            1.0
        );
    }

    #[test]
    fn boundary_f_shifted_square_tol2() {
        let sq = Mask::from_fn(10, 10, |r, c| (1..8).contains(&r) && (1..8).contains(&c));
        let shifted = sq.translated(0, 1);
        assert_eq!(boundary_f(&shifted, &sq, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn boundary_f_matches_reference_randomly() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..60 {
            let h = rng.random_range(2..=20);
            let w = rng.random_range(2..=20);
            let a = random_mask(&mut rng, h, w, 0.4);
            let b = random_mask(&mut rng, h, w, 0.4);
            let tol = rng.random_range(1..=3) as f64;
            let got = boundary_f(&a, &b, tol).unwrap();
            let want = boundary_f_reference(&a, &b, tol);
            assert_eq!(got, want, "h={h} w={w} tol={tol}");
        }
    }

    #[test]
    fn frame_jf_identity_and_allbackground() {
        let mut gt = LabelMap::zeros(8, 8);
        for r in 2..6 {
            for c in 2..6 {
                gt.set(r, c, 1);
            }
        }
        let matching = BTreeMap::from([(1u8, 1u8)]);
        let s = frame_jf(&gt, &gt, &matching, &[1], 2.0).unwrap();
        assert_eq!(s.mean.jf, 1.0);

        let empty = LabelMap::zeros(8, 8);
        let s = frame_jf(&empty, &gt, &BTreeMap::new(), &[1], 2.0).unwrap();
        assert_eq!(s.mean.jf, 0.0);
    }

    #[test]
    fn frame_jf_half_when_one_of_two_matched() {
        let mut gt = LabelMap::zeros(10, 10);
        for r in 1..4 {
            for c in 1..4 {
                gt.set(r, c, 1);
            }
        }
        for r in 6..9 {
            for c in 6..9 {
                gt.set(r, c, 2);
            }
        }
        let mut pred = LabelMap::zeros(10, 10);
        for r in 1..4 {
            for c in 1..4 {
                pred.set(r, c, 1);
            }
        }
        let matching = BTreeMap::from([(1u8, 1u8)]);
        let s = frame_jf(&pred, &gt, &matching, &[1, 2], 2.0).unwrap();
        assert_eq!(s.per_object.len(), 2);
        assert!((s.mean.jf - 0.5).abs() < 1e-12);
    }

    #[test]
    fn frame_jf_rejects_bad_matching() {
        let gt = LabelMap::zeros(4, 4);
        let pred = LabelMap::zeros(4, 4);
        let matching = BTreeMap::from([(1u8, 7u8)]);
        assert!(matches!(
            frame_jf(&pred, &gt, &matching, &[1, 2], 1.0),
            Err(Error::InvalidMatching(_))
        ));
    }

    #[test]
    fn frame_jf_mean_is_mean_of_per_object() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let mut gt = LabelMap::zeros(12, 12);
            let mut pred = LabelMap::zeros(12, 12);
            for r in 0..12 {
                for c in 0..12 {
                    gt.set(r, c, rng.random_range(0..3) as u8);
                    pred.set(r, c, rng.random_range(0..3) as u8);
                }
            }
            let matching = BTreeMap::from([(1u8, 1u8), (2u8, 2u8)]);
            let s = frame_jf(&pred, &gt, &matching, &[1, 2], 1.0).unwrap();
            let n = s.per_object.len() as f64;
            let mj: f64 = s.per_object.iter().map(|(_, x)| x.jf).sum::<f64>() / n;
            assert!((s.mean.jf - mj).abs() < 1e-9);
            assert!((s.mean.jf - (s.mean.j + s.mean.f) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sequence_stats_cases() {
        let s = sequence_stats(&[0.7, 0.7, 0.7, 0.7]).unwrap();
        assert!((s.mean - 0.7).abs() < 1e-15);
        assert_eq!(s.decay, 0.0);

        let s = sequence_stats(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((s.mean - 0.5).abs() < 1e-15);
        assert!((s.decay - 1.0).abs() < 1e-15);

        assert!(matches!(sequence_stats(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn dataset_recall_fraction() {
        let stats: Vec<SequenceStats> = [0.6, 0.4, 0.9]
            .iter()
            .map(|&m| SequenceStats { mean: m, recall: if m > 0.5 { 1.0 } else { 0.0 }, decay: 0.0 })
            .collect();
        let agg = aggregate_stats(&stats).unwrap();
        assert!((agg.recall - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn decay_negates_under_reversal() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let xs: Vec<f64> = (0..n).map(|_| rng.random()).collect();
            let mut rev = xs.clone();
            rev.reverse();
            let d1 = sequence_stats(&xs).unwrap().decay;
            let d2 = sequence_stats(&rev).unwrap().decay;
            assert!((d1 + d2).abs() < 1e-12);
        }
    }

    #[test]
    fn video_matching_recovers_identity_permutation() {
        // slot 5 follows instance 1, slot 2 follows instance 3
        let mut gt1 = LabelMap::zeros(8, 8);
        let mut pr1 = LabelMap::zeros(8, 8);
        for r in 0..3 {
            for c in 0..3 {
                gt1.set(r, c, 1);
                pr1.set(r, c, 5);
            }
        }
        for r in 5..8 {
            for c in 5..8 {
                gt1.set(r, c, 3);
                pr1.set(r, c, 2);
            }
        }
        let m = video_matching(&[pr1.clone()], &[gt1.clone()]).unwrap();
        assert_eq!(m, BTreeMap::from([(5u8, 1u8), (2u8, 3u8)]));

        let eval = evaluate_video(&[pr1], &[gt1]).unwrap();
        assert!((eval.jf.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_csv_shape() {
        let row = ReportRow {
            name: "seq".into(),
            jf: SequenceStats { mean: 0.5, recall: 1.0, decay: 0.0 },
            j: SequenceStats { mean: 0.4, recall: 0.0, decay: 0.1 },
            f: SequenceStats { mean: 0.6, recall: 1.0, decay: -0.1 },
        };
        let csv = report_csv("Sequence", &[row]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "Sequence,J&F-Mean,J-Mean,J-Recall,J-Decay,F-Mean,F-Recall,F-Decay"
        );
        assert_eq!(lines.next().unwrap(), "seq,50.0,40.0,0.0,10.0,60.0,100.0,-10.0");
    }
}
