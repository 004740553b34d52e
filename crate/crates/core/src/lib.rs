//! Proposal-grouping video object segmentation.
//!
//! The pipeline selects moving object proposals with a small conv-net
//! classifier, groups them into persistent object identities with a Siamese
//! relational assignment network applied sequentially per frame, and
//! fine-tunes the assignment policy with REINFORCE so that the
//! non-differentiable J&F overlap metric is optimized directly.

pub mod error;
pub mod hungarian;
pub mod mask;
pub mod metrics;
pub mod video;

pub use error::{Error, Result};
pub use mask::{rle_decode, rle_encode, BBox, Mask};
pub use metrics::{boundary_f, frame_jf, iou, sequence_stats, FrameScore, SequenceStats};
pub use video::{project_to_labelmap, Frame, LabelMap, Proposal, SegTensor, VideoSample};
