//! Synthetic moving-shapes video generator with exact ground-truth flow, plus
//! the noisy proposal synthesizer that stands in for an off-the-shelf
//! proposal generator.

use std::collections::BTreeMap;

use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::video::{Frame, LabelMap, Proposal, VideoSample, DEFAULT_FEATURE_DIM};

/// Object motion: either explicit per-object velocities (cycled over objects)
/// or integer velocities sampled per object from a speed range. Each frame,
/// direction is resampled with probability `dir_change_prob`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MotionModel {
    /// Explicit (vx, vy) per object, in pixels/frame; cycled when fewer
    /// entries than objects. Overrides the speed range.
    #[serde(default)]
    pub velocities: Option<Vec<(isize, isize)>>,
    #[serde(default = "default_speed_min")]
    pub speed_min: usize,
    #[serde(default = "default_speed_max")]
    pub speed_max: usize,
    #[serde(default)]
    pub dir_change_prob: f64,
}

fn default_speed_min() -> usize {
    1
}
fn default_speed_max() -> usize {
    3
}

impl Default for MotionModel {
    fn default() -> Self {
        MotionModel {
            velocities: None,
            speed_min: default_speed_min(),
            speed_max: default_speed_max(),
            dir_change_prob: 0.05,
        }
    }
}

/// Scene parameters for one generated video.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneSpec {
    pub num_objects: usize,
    #[serde(default)]
    pub num_distractors: usize,
    pub frames: usize,
    /// (h, w), both at least 32.
    pub resolution: (usize, usize),
    #[serde(default)]
    pub motion: MotionModel,
    pub seed: u64,
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_objects < 1 {
            return Err(Error::InvalidSpec("num_objects must be >= 1".into()));
        }
        if self.frames < 2 {
            return Err(Error::InvalidSpec("frames must be >= 2".into()));
        }
        if self.resolution.0 < 32 || self.resolution.1 < 32 {
            return Err(Error::InvalidSpec(format!(
                "resolution {}x{} below the 32x32 minimum",
                self.resolution.0, self.resolution.1
            )));
        }
        Ok(())
    }
}

/// Noise model for the proposal synthesizer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProposalNoise {
    /// Std-dev of the per-proposal translation jitter, pixels.
    #[serde(default)]
    pub boundary_jitter: f64,
    /// Expected false positives per frame (Poisson).
    #[serde(default)]
    pub fp_rate: f64,
    /// Probability a true object yields no proposal in a frame.
    #[serde(default)]
    pub fn_rate: f64,
    /// Std-dev of the confidence noise.
    #[serde(default)]
    pub confidence_noise: f64,
}

impl ProposalNoise {
    pub fn none() -> Self {
        ProposalNoise { boundary_jitter: 0.0, fp_rate: 0.0, fn_rate: 0.0, confidence_noise: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.boundary_jitter < 0.0
            || self.fp_rate < 0.0
            || !(0.0..=1.0).contains(&self.fn_rate)
            || self.confidence_noise < 0.0
        {
            return Err(Error::InvalidSpec("proposal noise rates out of range".into()));
        }
        Ok(())
    }
}

impl Default for ProposalNoise {
    fn default() -> Self {
        ProposalNoise { boundary_jitter: 1.0, fp_rate: 1.0, fn_rate: 0.05, confidence_noise: 0.15 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ShapeKind {
    Rect,
    Ellipse,
    Polygon,
}

#[derive(Debug, Clone)]
struct Shape {
    kind: ShapeKind,
    rx: f64,
    ry: f64,
    /// Polygon vertices relative to center, (dx, dy).
    verts: Vec<(f64, f64)>,
    color: [f64; 3],
}

impl Shape {
    fn extent(&self) -> (isize, isize) {
        let max_r = match self.kind {
            ShapeKind::Polygon => self
                .verts
                .iter()
                .map(|&(x, y)| x.abs().max(y.abs()))
                .fold(0.0, f64::max),
            _ => self.rx.max(self.ry),
        };
        (max_r.ceil() as isize, max_r.ceil() as isize)
    }

    fn contains(&self, dx: f64, dy: f64) -> bool {
        match self.kind {
            ShapeKind::Rect => dx.abs() <= self.rx && dy.abs() <= self.ry,
            ShapeKind::Ellipse => {
                let a = dx / self.rx;
                let b = dy / self.ry;
                a * a + b * b <= 1.0
            }
            ShapeKind::Polygon => point_in_polygon(dx, dy, &self.verts),
        }
    }

    fn rasterize(&self, h: usize, w: usize, cy: isize, cx: isize) -> Mask {
        let (ex, ey) = self.extent();
        let mut m = Mask::zeros(h, w);
        let r0 = (cy - ey).max(0);
        let r1 = (cy + ey).min(h as isize - 1);
        let c0 = (cx - ex).max(0);
        let c1 = (cx + ex).min(w as isize - 1);
        for r in r0..=r1 {
            for c in c0..=c1 {
                if self.contains((c - cx) as f64, (r - cy) as f64) {
                    m.set(r as usize, c as usize, true);
                }
            }
        }
        m
    }
}

fn point_in_polygon(px: f64, py: f64, verts: &[(f64, f64)]) -> bool {
    let n = verts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = verts[i];
        let (xj, yj) = verts[j];
        if ((yi > py) != (yj > py)) && (px < (xj - xi) * (py - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [f64; 3] {
    let h = (h.rem_euclid(1.0)) * 6.0;
    let i = h.floor() as usize % 6;
    let f = h - h.floor();
    let p = v * (1.0 - s);
    let q = v * (1.0 - f * s);
    let t = v * (1.0 - (1.0 - f) * s);
    match i {
        0 => [v, t, p],
        1 => [q, v, p],
        2 => [p, v, t],
        3 => [p, q, v],
        4 => [t, p, v],
        _ => [v, p, q],
    }
}

fn sample_shape(rng: &mut ChaCha8Rng, base: f64, hue: f64) -> Shape {
    let kind = match rng.random_range(0..3) {
        0 => ShapeKind::Rect,
        1 => ShapeKind::Ellipse,
        _ => ShapeKind::Polygon,
    };
    let rx = base * rng.random_range(0.10..0.16);
    let ry = base * rng.random_range(0.10..0.16);
    let verts = if kind == ShapeKind::Polygon {
        let sides = rng.random_range(3..=5);
        let rot: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        (0..sides)
            .map(|k| {
                let ang = rot + std::f64::consts::TAU * k as f64 / sides as f64;
                let rad = rx.max(ry) * rng.random_range(0.8..1.15);
                (rad * ang.cos(), rad * ang.sin())
            })
            .collect()
    } else {
        Vec::new()
    };
    Shape { kind, rx, ry, verts, color: hsv_to_rgb(hue, 0.75, 0.9) }
}

fn sample_velocity(rng: &mut ChaCha8Rng, motion: &MotionModel) -> (isize, isize) {
    let speed = rng.random_range(motion.speed_min.max(1)..=motion.speed_max.max(1)) as f64;
    let ang: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let vx = (speed * ang.cos()).round() as isize;
    let vy = (speed * ang.sin()).round() as isize;
    if vx == 0 && vy == 0 {
        (1, 0)
    } else {
        (vx, vy)
    }
}

const GOLDEN: f64 = 0.618_033_988_749_895;

/// Generates a moving-shapes video with ground truth and exact flow.
///
/// Moving objects keep persistent identities 1..num_objects; distractors are
/// static shapes rendered into the image only. The flow at frame `t` is the
/// true per-pixel displacement from `t` to `t+1` (zero on the last frame).
pub fn generate_video(spec: &SceneSpec) -> Result<VideoSample> {
    spec.validate()?;
    let (h, w) = spec.resolution;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = h.min(w) as f64;
    let hue0: f64 = rng.random();

    // distractors are the background layer
    let mut distractors = Vec::new();
    for d in 0..spec.num_distractors {
        let shape = sample_shape(&mut rng, base * 0.8, hue0 + GOLDEN * (spec.num_objects + d) as f64);
        let (ex, ey) = shape.extent();
        let cy = sample_center(&mut rng, h, ey)?;
        let cx = sample_center(&mut rng, w, ex)?;
        distractors.push((shape, cy, cx));
    }

    let mut shapes = Vec::new();
    let mut positions: Vec<(isize, isize)> = Vec::new();
    let mut velocities: Vec<(isize, isize)> = Vec::new();
    for i in 0..spec.num_objects {
        let shape = sample_shape(&mut rng, base, hue0 + GOLDEN * i as f64);
        let (ex, ey) = shape.extent();
        // spread starting positions; fall back to any valid center
        let mut placed = None;
        for _ in 0..40 {
            let cy = sample_center(&mut rng, h, ey)?;
            let cx = sample_center(&mut rng, w, ex)?;
            let ok = positions
                .iter()
                .all(|&(py, px)| (py - cy).abs() + (px - cx).abs() > (base * 0.35) as isize);
            if ok {
                placed = Some((cy, cx));
                break;
            }
        }
        let (cy, cx) = match placed {
            Some(p) => p,
            None => (sample_center(&mut rng, h, ey)?, sample_center(&mut rng, w, ex)?),
        };
        let vel = match &spec.motion.velocities {
            Some(vs) if !vs.is_empty() => vs[i % vs.len()],
            _ => sample_velocity(&mut rng, &spec.motion),
        };
        shapes.push(shape);
        positions.push((cy, cx));
        velocities.push(vel);
    }

    let mut frames = Vec::with_capacity(spec.frames);
    let mut gt = Vec::with_capacity(spec.frames);
    let noise = Normal::new(0.0, 0.01).unwrap();

    for t in 0..spec.frames {
        // rasterize masks at current positions
        let masks: Vec<Mask> = shapes
            .iter()
            .zip(&positions)
            .map(|(s, &(cy, cx))| s.rasterize(h, w, cy, cx))
            .collect();

        // label map: higher-indexed objects drawn on top
        let mut lm = LabelMap::zeros(h, w);
        for (i, m) in masks.iter().enumerate() {
            for r in 0..h {
                for c in 0..w {
                    if m.get(r, c) {
                        lm.set(r, c, (i + 1) as u8);
                    }
                }
            }
        }

        // image: background, distractors, then objects
        let mut image = Array3::<f64>::from_elem((h, w, 3), 0.12);
        for (shape, cy, cx) in &distractors {
            paint(&mut image, &shape.rasterize(h, w, *cy, *cx), shape.color);
        }
        for (i, m) in masks.iter().enumerate() {
            paint(&mut image, m, shapes[i].color);
        }
        for v in image.iter_mut() {
            *v = (*v + noise.sample(&mut rng)).clamp(0.0, 1.0);
        }

        // step velocities for t -> t+1, then write the exact flow
        let mut flow = Array3::<f64>::zeros((h, w, 2));
        if t + 1 < spec.frames {
            for i in 0..spec.num_objects {
                if spec.motion.velocities.is_none() && rng.random::<f64>() < spec.motion.dir_change_prob
                {
                    velocities[i] = sample_velocity(&mut rng, &spec.motion);
                }
                let (ex, ey) = shapes[i].extent();
                let (cy, cx) = positions[i];
                let (mut vx, mut vy) = velocities[i];
                if cx + vx - ex < 0 || cx + vx + ex >= w as isize {
                    vx = -vx;
                }
                if cy + vy - ey < 0 || cy + vy + ey >= h as isize {
                    vy = -vy;
                }
                velocities[i] = (vx, vy);
                positions[i] = (cy + vy, cx + vx);
            }
            for r in 0..h {
                for c in 0..w {
                    let id = lm.get(r, c);
                    if id > 0 {
                        let (vx, vy) = velocities[(id - 1) as usize];
                        flow[(r, c, 0)] = vx as f64;
                        flow[(r, c, 1)] = vy as f64;
                    }
                }
            }
        }

        frames.push(Frame { image, flow });
        gt.push(lm);
    }

    Ok(VideoSample {
        name: format!("synth-{:08x}", spec.seed),
        proposals: vec![Vec::new(); spec.frames],
        frames,
        gt: Some(gt),
    })
}

fn sample_center(rng: &mut ChaCha8Rng, dim: usize, extent: isize) -> Result<isize> {
    let lo = extent + 1;
    let hi = dim as isize - 2 - extent;
    if lo >= hi {
        return Err(Error::Placement(format!(
            "shape with extent {extent} does not fit in dimension {dim}"
        )));
    }
    Ok(rng.random_range(lo..hi))
}

fn paint(image: &mut Array3<f64>, mask: &Mask, color: [f64; 3]) {
    for r in 0..mask.h() {
        for c in 0..mask.w() {
            if mask.get(r, c) {
                for ch in 0..3 {
                    image[(r, c, ch)] = color[ch];
                }
            }
        }
    }
}

/// Appearance descriptor: normalized per-channel color histogram (8 bins per
/// channel, Hellinger-scaled) plus log-compressed Hu moments and coarse shape
/// statistics, zero-padded to `d_f`.
pub fn appearance_feature(image: &Array3<f64>, mask: &Mask, d_f: usize) -> Vec<f64> {
    let mut feat = Vec::with_capacity(d_f);
    let mut hist = [0.0f64; 24];
    let mut count = 0.0;
    for r in 0..mask.h() {
        for c in 0..mask.w() {
            if mask.get(r, c) {
                count += 1.0;
                for ch in 0..3 {
                    let bin = ((image[(r, c, ch)] * 8.0) as usize).min(7);
                    hist[ch * 8 + bin] += 1.0;
                }
            }
        }
    }
    if count > 0.0 {
        for v in hist.iter_mut() {
            *v = (*v / count).sqrt();
        }
    }
    feat.extend_from_slice(&hist);
    feat.extend(hu_moments(mask).iter().map(|&m| {
        // log compression keeps the wildly-scaled invariants comparable
        m.signum() * (1.0 + m.abs() * 1e6).ln() / 10.0
    }));
    let area = mask.area() as f64;
    let total = (mask.h() * mask.w()) as f64;
    feat.push((area / total).sqrt());
    if let Some(bb) = mask.tight_bbox() {
        feat.push((bb.w as f64 / bb.h as f64).ln().clamp(-2.0, 2.0) / 2.0);
        feat.push(area / (bb.w * bb.h) as f64);
    } else {
        feat.push(0.0);
        feat.push(0.0);
    }
    feat.resize(d_f, 0.0);
    feat.truncate(d_f);
    feat
}

/// The seven Hu invariant moments of a binary mask.
fn hu_moments(mask: &Mask) -> [f64; 7] {
    let mut m00 = 0.0;
    let mut m10 = 0.0;
    let mut m01 = 0.0;
    for r in 0..mask.h() {
        for c in 0..mask.w() {
            if mask.get(r, c) {
                m00 += 1.0;
                m10 += c as f64;
                m01 += r as f64;
            }
        }
    }
    if m00 == 0.0 {
        return [0.0; 7];
    }
    let xc = m10 / m00;
    let yc = m01 / m00;
    let mut mu = [[0.0f64; 4]; 4];
    for r in 0..mask.h() {
        for c in 0..mask.w() {
            if mask.get(r, c) {
                let dx = c as f64 - xc;
                let dy = r as f64 - yc;
                for p in 0..4 {
                    for q in 0..4 {
                        if p + q <= 3 {
                            mu[p][q] += dx.powi(p as i32) * dy.powi(q as i32);
                        }
                    }
                }
            }
        }
    }
    let eta = |p: usize, q: usize| mu[p][q] / m00.powf(1.0 + (p + q) as f64 / 2.0);
    let (n20, n02, n11) = (eta(2, 0), eta(0, 2), eta(1, 1));
    let (n30, n03, n21, n12) = (eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2));
    [
        n20 + n02,
        (n20 - n02).powi(2) + 4.0 * n11 * n11,
        (n30 - 3.0 * n12).powi(2) + (3.0 * n21 - n03).powi(2),
        (n30 + n12).powi(2) + (n21 + n03).powi(2),
        (n30 - 3.0 * n12) * (n30 + n12)
            * ((n30 + n12).powi(2) - 3.0 * (n21 + n03).powi(2))
            + (3.0 * n21 - n03) * (n21 + n03) * (3.0 * (n30 + n12).powi(2) - (n21 + n03).powi(2)),
        (n20 - n02) * ((n30 + n12).powi(2) - (n21 + n03).powi(2))
            + 4.0 * n11 * (n30 + n12) * (n21 + n03),
        (3.0 * n21 - n03) * (n30 + n12)
            * ((n30 + n12).powi(2) - 3.0 * (n21 + n03).powi(2))
            - (n30 - 3.0 * n12) * (n21 + n03) * (3.0 * (n30 + n12).powi(2) - (n21 + n03).powi(2)),
    ]
}

/// Fills `video.proposals` with noisy proposals derived from the ground
/// truth: one jittered proposal per instance (minus dropouts) plus false
/// positives on distractor-like regions, sorted by descending confidence.
pub fn synthesize_proposals(
    video: &VideoSample,
    noise: &ProposalNoise,
    d_f: usize,
    seed: u64,
) -> Result<VideoSample> {
    noise.validate()?;
    let gt = video
        .gt
        .as_ref()
        .ok_or_else(|| Error::TrainingData("synthesize_proposals needs ground truth".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (h, w) = (video.h(), video.w());
    let jitter = Normal::new(0.0, noise.boundary_jitter.max(1e-12)).unwrap();
    let conf_true = Normal::new(0.8, noise.confidence_noise.max(1e-12)).unwrap();
    let conf_fp = Normal::new(0.45, noise.confidence_noise.max(1e-12)).unwrap();

    let mut out = video.clone();
    for (t, lm) in gt.iter().enumerate() {
        let image = &video.frames[t].image;
        let mut props: Vec<Proposal> = Vec::new();

        for id in lm.instance_ids() {
            if rng.random::<f64>() < noise.fn_rate {
                continue;
            }
            let m = lm.mask_of(id);
            let jittered = jitter_mask(&m, noise.boundary_jitter, &jitter, &mut rng);
            let Some(jittered) = jittered else { continue };
            let confidence = sample_conf(&conf_true, noise.confidence_noise, &mut rng);
            let feature = appearance_feature(image, &jittered, d_f);
            props.push(Proposal::from_mask(jittered, feature, confidence)?);
        }

        let n_fp = if noise.fp_rate > 0.0 {
            Poisson::new(noise.fp_rate).unwrap().sample(&mut rng) as usize
        } else {
            0
        };
        for _ in 0..n_fp {
            let m = false_positive_mask(image, lm, h, w, &mut rng);
            let Some(m) = m else { continue };
            let jittered =
                jitter_mask(&m, noise.boundary_jitter.max(0.5), &jitter, &mut rng);
            let Some(jittered) = jittered else { continue };
            let confidence = sample_conf(&conf_fp, noise.confidence_noise.max(0.05), &mut rng);
            let feature = appearance_feature(image, &jittered, d_f);
            props.push(Proposal::from_mask(jittered, feature, confidence)?);
        }

        props.sort_by(|a, b| b.confidence.partial_cmp(&a.confidence).unwrap());
        out.proposals[t] = props;
    }
    Ok(out)
}

fn sample_conf(dist: &Normal<f64>, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    if sigma == 0.0 {
        dist.mean().clamp(0.05, 1.0)
    } else {
        dist.sample(rng).clamp(0.05, 1.0)
    }
}

fn jitter_mask(
    m: &Mask,
    amount: f64,
    jitter: &Normal<f64>,
    rng: &mut ChaCha8Rng,
) -> Option<Mask> {
    let mut out = if amount == 0.0 {
        m.clone()
    } else {
        let dr = jitter.sample(rng).round() as isize;
        let dc = jitter.sample(rng).round() as isize;
        m.translated(dr, dc)
    };
    if amount > 0.0 && rng.random::<f64>() < (amount / 4.0).min(0.5) {
        out = if rng.random::<bool>() { dilate1(&out) } else { erode1(&out) };
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

fn dilate1(m: &Mask) -> Mask {
    let (h, w) = m.shape();
    Mask::from_fn(h, w, |r, c| {
        m.get(r, c)
            || (r > 0 && m.get(r - 1, c))
            || (r + 1 < h && m.get(r + 1, c))
            || (c > 0 && m.get(r, c - 1))
            || (c + 1 < w && m.get(r, c + 1))
    })
}

fn erode1(m: &Mask) -> Mask {
    let (h, w) = m.shape();
    Mask::from_fn(h, w, |r, c| {
        m.get(r, c)
            && r > 0
            && m.get(r - 1, c)
            && r + 1 < h
            && m.get(r + 1, c)
            && c > 0
            && m.get(r, c - 1)
            && c + 1 < w
            && m.get(r, c + 1)
    })
}

/// A false positive: a connected off-object color region (a distractor) when
/// one exists, otherwise a random background blob.
fn false_positive_mask(
    image: &Array3<f64>,
    gt: &LabelMap,
    h: usize,
    w: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Mask> {
    // probe a few random pixels for a colorful non-gt region
    for _ in 0..20 {
        let r = rng.random_range(0..h);
        let c = rng.random_range(0..w);
        if gt.get(r, c) != 0 {
            continue;
        }
        let px = [image[(r, c, 0)], image[(r, c, 1)], image[(r, c, 2)]];
        let sat = px.iter().cloned().fold(0.0, f64::max) - px.iter().cloned().fold(1.0, f64::min);
        if sat > 0.2 {
            // flood-fill similar off-gt colors around the probe
            return flood_region(image, gt, r, c, 0.12);
        }
    }
    // fallback: random ellipse blob on background
    let ry = rng.random_range(3..(h / 6).max(4)) as f64;
    let rx = rng.random_range(3..(w / 6).max(4)) as f64;
    let cy = rng.random_range(ry as usize + 1..h - ry as usize - 1) as isize;
    let cx = rng.random_range(rx as usize + 1..w - rx as usize - 1) as isize;
    let shape = Shape { kind: ShapeKind::Ellipse, rx, ry, verts: Vec::new(), color: [0.0; 3] };
    let m = shape.rasterize(h, w, cy, cx);
    if m.is_empty() {
        None
    } else {
        Some(m)
    }
}

fn flood_region(
    image: &Array3<f64>,
    gt: &LabelMap,
    r0: usize,
    c0: usize,
    tol: f64,
) -> Option<Mask> {
    let (h, w) = (gt.h(), gt.w());
    let seedc = [image[(r0, c0, 0)], image[(r0, c0, 1)], image[(r0, c0, 2)]];
    let mut m = Mask::zeros(h, w);
    let mut stack = vec![(r0, c0)];
    let mut visited = vec![false; h * w];
    let mut count = 0usize;
    while let Some((r, c)) = stack.pop() {
        let idx = r * w + c;
        if visited[idx] {
            continue;
        }
        visited[idx] = true;
        if gt.get(r, c) != 0 {
            continue;
        }
        let d = (0..3)
            .map(|ch| (image[(r, c, ch)] - seedc[ch]).abs())
            .fold(0.0, f64::max);
        if d > tol {
            continue;
        }
        m.set(r, c, true);
        count += 1;
        if count > h * w / 4 {
            break;
        }
        if r > 0 {
            stack.push((r - 1, c));
        }
        if r + 1 < h {
            stack.push((r + 1, c));
        }
        if c > 0 {
            stack.push((r, c - 1));
        }
        if c + 1 < w {
            stack.push((r, c + 1));
        }
    }
    if count < 6 {
        None
    } else {
        Some(m)
    }
}

/// One split of the synthetic benchmark manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkSplit {
    pub videos: usize,
    pub frames: usize,
    pub height: usize,
    pub width: usize,
    pub objects_min: usize,
    pub objects_max: usize,
    pub distractors_min: usize,
    pub distractors_max: usize,
    #[serde(default)]
    pub motion: MotionModel,
    #[serde(default)]
    pub noise: ProposalNoise,
    pub seed: u64,
}

/// The benchmark manifest: scene and noise parameters per split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkManifest {
    pub name: String,
    #[serde(default = "default_feature_dim")]
    pub feature_dim: usize,
    pub splits: BTreeMap<String, BenchmarkSplit>,
}

fn default_feature_dim() -> usize {
    DEFAULT_FEATURE_DIM
}

impl BenchmarkManifest {
    /// The default desk-scale benchmark: 20 train / 5 val / 10 test videos,
    /// 24 frames, 2-4 objects each.
    pub fn desk_default() -> Self {
        let split = |videos: usize, seed: u64| BenchmarkSplit {
            videos,
            frames: 24,
            height: 48,
            width: 64,
            objects_min: 2,
            objects_max: 4,
            distractors_min: 2,
            distractors_max: 4,
            motion: MotionModel::default(),
            noise: ProposalNoise::default(),
            seed,
        };
        let mut splits = BTreeMap::new();
        splits.insert("train".to_string(), split(20, 1000));
        splits.insert("val".to_string(), split(5, 2000));
        splits.insert("test".to_string(), split(10, 3000));
        BenchmarkManifest { name: "desk".into(), feature_dim: DEFAULT_FEATURE_DIM, splits }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(format!("manifest parse: {e}")))
    }

    /// Re-seeds every split by `offset`, keeping splits disjoint.
    pub fn with_seed_offset(mut self, offset: u64) -> Self {
        for split in self.splits.values_mut() {
            split.seed = split.seed.wrapping_add(offset.wrapping_mul(10_000));
        }
        self
    }
}

/// Generates all videos of one split, proposals included.
pub fn generate_split(split: &BenchmarkSplit, feature_dim: usize) -> Result<Vec<VideoSample>> {
    let mut out = Vec::with_capacity(split.videos);
    for v in 0..split.videos {
        let seed = split.seed.wrapping_add(v as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x5851_f42d_4c95_7f2d));
        let spec = SceneSpec {
            num_objects: rng.random_range(split.objects_min..=split.objects_max),
            num_distractors: rng.random_range(split.distractors_min..=split.distractors_max),
            frames: split.frames,
            resolution: (split.height, split.width),
            motion: split.motion.clone(),
            seed,
        };
        let video = generate_video(&spec)?;
        let mut video = synthesize_proposals(&video, &split.noise, feature_dim, seed ^ 0xabcd)?;
        video.name = format!("{:03}", v);
        out.push(video);
    }
    Ok(out)
}
