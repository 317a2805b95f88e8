//! Event and blur synthesis from sharp video, and event voxelization.

mod blur;
mod simulate;
mod video;
mod voxel;

pub use blur::synthesize_blur;
pub use simulate::{polarity, simulate_events, ThresholdConfig, INTENSITY_FLOOR};
pub use video::SharpVideo;
pub use voxel::{bin_index, signed_count_between, voxelize, EventHistogram, DEFAULT_BINS};
