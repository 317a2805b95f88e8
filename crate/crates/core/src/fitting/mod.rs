//! Coefficient fitting against sharp video and the double-integral baseline.

mod edi;
mod lsq;

pub use edi::{edi_reconstruct, edi_reconstruct_frames, DEFAULT_EDI_THRESHOLD};
pub use lsq::{fit_polys, PolyFit, RIDGE};
