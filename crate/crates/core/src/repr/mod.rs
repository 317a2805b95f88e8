//! Continuous per-pixel intensity representation.

mod event;
mod field;
mod frame;
mod interval;
mod keypoints;
pub mod lagrange;
mod poly;

pub use event::{Event, EventStream, PixelEvents, Polarity};
pub use field::PolyField;
pub(crate) use frame::ensure_uniform_shape;
pub use frame::{BlurryFrame, Frame};
pub use interval::ExposureInterval;
pub use keypoints::{select_keypoints, select_keypoints_per_pixel, KeypointSet, DEDUP_OFFSET};
pub use lagrange::lagrange_basis;
pub use poly::{horner, solve_constant, IntensityPoly, MonomialPoly};
