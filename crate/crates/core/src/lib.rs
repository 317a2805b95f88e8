//! Continuous per-pixel intensity representation for event-guided motion
//! deblurring.
//!
//! Every pixel's intensity over an exposure is a polynomial whose time
//! derivative interpolates values at event-aligned keypoints through Lagrange
//! bases; the blurry frame fixes the integration constant. Around that
//! representation the crate provides event and blur synthesis from sharp
//! video, least-squares coefficient fitting, the double-integral (EDI)
//! baseline, a residual-flow refinement solver, and quality metrics.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory; the
//! `ecir` binary exposes the same pipeline on files.

pub mod cli;
pub mod error;
pub mod fitting;
pub mod io;
pub mod metrics;
pub mod refine;
pub mod repr;
pub mod sim;

pub use error::{Error, Result};
pub use repr::{
    BlurryFrame, Event, EventStream, ExposureInterval, Frame, IntensityPoly, KeypointSet,
    MonomialPoly, Polarity, PolyField,
};
