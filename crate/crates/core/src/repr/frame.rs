use crate::error::{Error, Result};
use crate::repr::ExposureInterval;

/// Row-major `height x width` grid of intensities (or any per-pixel scalar).
///
/// Values are unclamped; [`Frame::clamped`] produces the exported `[0, 1]` view.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::shape(
                format!("{} values for {width}x{height}", width * height),
                values.len(),
            ));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self {
            width,
            height,
            values: vec![value; width * height],
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = v;
    }

    pub fn same_shape(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_shape(&self, other: &Frame) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(
                format!("{}x{}", self.width, self.height),
                format!("{}x{}", other.width, other.height),
            ))
        }
    }

    #[must_use]
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Frame {
        Frame {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    #[must_use]
    pub fn clamped(&self) -> Frame {
        self.map(|v| v.clamp(0.0, 1.0))
    }
}

/// A blurry frame together with the exposure it integrates over.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurryFrame {
    pub frame: Frame,
    pub interval: ExposureInterval,
}

impl BlurryFrame {
    pub fn new(frame: Frame, interval: ExposureInterval) -> Self {
        Self { frame, interval }
    }

    pub fn width(&self) -> usize {
        self.frame.width()
    }

    pub fn height(&self) -> usize {
        self.frame.height()
    }
}

/// Checks that every frame in `frames` has the shape of the first one.
pub(crate) fn ensure_uniform_shape(frames: &[Frame]) -> Result<()> {
    if let Some(first) = frames.first() {
        for f in &frames[1..] {
            first.ensure_same_shape(f)?;
        }
    }
    Ok(())
}
