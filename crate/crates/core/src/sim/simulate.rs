use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::{Event, EventStream, Polarity};
use crate::sim::SharpVideo;

/// Intensities below this are floored before taking the logarithm.
pub const INTENSITY_FLOOR: f64 = 1e-3;

/// Slack (log units) absorbing round-off when a ramp lands exactly on a threshold.
const CROSSING_SLACK: f64 = 1e-12;

/// Smallest jittered threshold, as a fraction of the nominal one.
const MIN_THRESHOLD_FRACTION: f64 = 0.01;

/// Contrast thresholds of the simulated sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    pub c_plus: f64,
    pub c_minus: f64,
    /// Relative standard deviation of the per-pixel threshold draw.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            c_plus: 0.2,
            c_minus: -0.2,
            sigma: 0.0,
            seed: 0,
        }
    }
}

impl ThresholdConfig {
    pub fn symmetric(c: f64) -> Self {
        Self {
            c_plus: c,
            c_minus: -c,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_plus > 0.0 && self.c_plus.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "c_plus must be positive, got {}",
                self.c_plus
            )));
        }
        if !(self.c_minus < 0.0 && self.c_minus.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "c_minus must be negative, got {}",
                self.c_minus
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "sigma must be non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// Per-pixel `(c_plus, c_minus)` drawn once, raster order, from `seed`.
    pub fn pixel_thresholds(&self, pixels: usize) -> Vec<(f64, f64)> {
        if self.sigma == 0.0 {
            return vec![(self.c_plus, self.c_minus); pixels];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let normal = Normal::new(0.0, self.sigma).expect("sigma validated");
        let jitter = |c: f64, z: f64| {
            let v = c * (1.0 + z);
            if v * c <= 0.0 || v.abs() < MIN_THRESHOLD_FRACTION * c.abs() {
                MIN_THRESHOLD_FRACTION * c
            } else {
                v
            }
        };
        (0..pixels)
            .map(|_| {
                let zp = normal.sample(&mut rng);
                let zm = normal.sample(&mut rng);
                (jitter(self.c_plus, zp), jitter(self.c_minus, zm))
            })
            .collect()
    }
}

/// Polarity of a log-intensity change: `+1` at or above `c_plus`, `-1` at or
/// below `c_minus`, otherwise no event.
pub fn polarity(delta_ln: f64, c_plus: f64, c_minus: f64) -> Option<Polarity> {
    if delta_ln >= c_plus {
        Some(Polarity::Positive)
    } else if delta_ln <= c_minus {
        Some(Polarity::Negative)
    } else {
        None
    }
}

fn log_intensity(v: f64) -> f64 {
    v.max(INTENSITY_FLOOR).ln()
}

/// Emits events for one pixel's sampled log-intensity series.
///
/// Between consecutive samples log-intensity is linear; every threshold
/// crossing inside a gap becomes one event at its interpolated time, and the
/// reference level moves to the level that fired.
fn simulate_pixel(
    times: &[f64],
    ln_values: &[f64],
    c_plus: f64,
    c_minus: f64,
    mut emit: impl FnMut(f64, Polarity),
) {
    let mut ln_ref = ln_values[0];
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        let (l0, l1) = (ln_values[k - 1], ln_values[k]);
        let slope = l1 - l0;
        while let Some(p) = polarity(
            l1 - ln_ref,
            c_plus - CROSSING_SLACK,
            c_minus + CROSSING_SLACK,
        ) {
            let level = match p {
                Polarity::Positive => ln_ref + c_plus,
                Polarity::Negative => ln_ref + c_minus,
            };
            let frac = if slope == 0.0 {
                1.0
            } else {
                ((level - l0) / slope).clamp(0.0, 1.0)
            };
            emit(t0 + frac * (t1 - t0), p);
            ln_ref = level;
        }
    }
}

/// Converts a sharp video into an event stream.
pub fn simulate_events(video: &SharpVideo, cfg: &ThresholdConfig) -> Result<EventStream> {
    cfg.validate()?;
    let (w, h) = (video.width(), video.height());
    let pixels = w * h;
    if let Some(v) = video
        .frames()
        .iter()
        .flat_map(|f| f.values())
        .find(|v| !v.is_finite())
    {
        return Err(Error::InvalidInput(format!("non-finite intensity {v}")));
    }
    let thresholds = cfg.pixel_thresholds(pixels);
    let times = video.timestamps();

    let per_pixel: Vec<Vec<Event>> = (0..pixels)
        .into_par_iter()
        .map(|idx| {
            let ln: Vec<f64> = video
                .frames()
                .iter()
                .map(|f| log_intensity(f.values()[idx]))
                .collect();
            let (cp, cm) = thresholds[idx];
            let (x, y) = ((idx % w) as u32, (idx / w) as u32);
            let mut out = Vec::new();
            simulate_pixel(times, &ln, cp, cm, |t, p| out.push(Event::new(x, y, t, p)));
            out
        })
        .collect();

    let events: Vec<Event> = per_pixel.into_iter().flatten().collect();
    EventStream::from_unsorted(events, video.interval(), w, h)
}
