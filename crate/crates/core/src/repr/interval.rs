use crate::error::{Error, Result};

/// Time window `[start, end]` (seconds) over which the frame sensor integrates light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExposureInterval {
    start: f64,
    end: f64,
}

impl ExposureInterval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "exposure bounds must be finite, got [{start}, {end}]"
            )));
        }
        if end <= start {
            return Err(Error::invalid_argument(format!(
                "degenerate exposure interval [{start}, {end}]"
            )));
        }
        Ok(Self { start, end })
    }

    /// Interval of length `duration` centred on zero, `[-T/2, T/2]`.
    pub fn centered(duration: f64) -> Result<Self> {
        Self::new(-0.5 * duration, 0.5 * duration)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                t,
                start: self.start,
                end: self.end,
            })
        }
    }

    /// Maps `t` onto the normalized coordinate `2(t - start)/T - 1`.
    #[inline]
    pub fn normalize(&self, t: f64) -> f64 {
        2.0 * (t - self.start) / self.duration() - 1.0
    }

    #[inline]
    pub fn denormalize(&self, tau: f64) -> f64 {
        self.start + 0.5 * (tau + 1.0) * self.duration()
    }

    /// `count` timestamps evenly spaced over the closed interval, endpoints included.
    ///
    /// A single timestamp sits at the interval midpoint.
    pub fn uniform_timestamps(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![0.5 * (self.start + self.end)],
            _ => {
                let last = (count - 1) as f64;
                (0..count)
                    .map(|k| {
                        if k + 1 == count {
                            self.end
                        } else {
                            self.start + self.duration() * k as f64 / last
                        }
                    })
                    .collect()
            }
        }
    }
}
