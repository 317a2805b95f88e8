use crate::error::{Error, Result};
use crate::repr::{ensure_uniform_shape, ExposureInterval, Frame};

/// Relative slack allowed between the first/last frame time and the interval ends.
const SPAN_TOLERANCE: f64 = 1e-9;

/// Sharp frames sampled densely across one exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpVideo {
    timestamps: Vec<f64>,
    frames: Vec<Frame>,
    interval: ExposureInterval,
}

impl SharpVideo {
    pub fn new(
        timestamps: Vec<f64>,
        frames: Vec<Frame>,
        interval: ExposureInterval,
    ) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a sharp video needs at least 2 frames, got {}",
                frames.len()
            )));
        }
        if timestamps.len() != frames.len() {
            return Err(Error::shape(
                format!("{} timestamps", frames.len()),
                timestamps.len(),
            ));
        }
        ensure_uniform_shape(&frames)?;
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "frame timestamps must be strictly increasing".into(),
            ));
        }
        let slack = SPAN_TOLERANCE * interval.duration();
        let (first, last) = (timestamps[0], timestamps[timestamps.len() - 1]);
        if (first - interval.start()).abs() > slack || (last - interval.end()).abs() > slack {
            return Err(Error::InvalidInput(format!(
                "frames span [{first}, {last}] but the exposure is [{}, {}]",
                interval.start(),
                interval.end()
            )));
        }
        Ok(Self {
            timestamps,
            frames,
            interval,
        })
    }

    /// Frames evenly spaced over the interval, endpoints included.
    pub fn uniform(frames: Vec<Frame>, interval: ExposureInterval) -> Result<Self> {
        let ts = interval.uniform_timestamps(frames.len());
        Self::new(ts, frames, interval)
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Time series of pixel `index`.
    pub fn pixel_series(&self, index: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.values()[index]).collect()
    }
}
