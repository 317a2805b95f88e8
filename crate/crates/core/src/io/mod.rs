//! File formats: text event streams, PGM/raw-float frames, polynomial
//! fields, frame directories and manifests.

pub mod events;
pub mod frames;
pub mod manifest;
pub mod polys;
pub mod video;

pub use events::{read_events, write_events, StreamGeometry};
pub use frames::{read_frame, read_planes, write_frame, write_planes, FrameFormat};
pub use manifest::Manifest;
pub use polys::{read_polys, write_polys};
pub use video::{read_frame_dir, read_video, write_frame_dir, write_video};
