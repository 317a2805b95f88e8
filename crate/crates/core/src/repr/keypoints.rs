use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::{EventStream, ExposureInterval};

/// Relative offset (in units of `T`) used to separate coincident keypoints.
pub const DEDUP_OFFSET: f64 = 1e-9;

/// Strictly increasing per-pixel timestamps at which the intensity derivative
/// is parameterized.
#[derive(Debug, Clone, PartialEq)]
pub struct KeypointSet {
    timestamps: Vec<f64>,
    interval: ExposureInterval,
}

impl KeypointSet {
    pub fn new(timestamps: Vec<f64>, interval: ExposureInterval) -> Result<Self> {
        if timestamps.is_empty() {
            return Err(Error::invalid_argument("keypoint set is empty"));
        }
        if let Some(&t) = timestamps.iter().find(|&&t| !interval.contains(t)) {
            return Err(Error::invalid_argument(format!(
                "keypoint {t} lies outside [{}, {}]",
                interval.start(),
                interval.end()
            )));
        }
        if let Some(i) = timestamps.windows(2).position(|w| w[1] <= w[0]) {
            if timestamps[i + 1] == timestamps[i] {
                return Err(Error::SingularBasis(i, i + 1));
            }
            return Err(Error::invalid_argument(format!(
                "keypoints must be strictly increasing ({} then {})",
                timestamps[i],
                timestamps[i + 1]
            )));
        }
        Ok(Self {
            timestamps,
            interval,
        })
    }

    /// `n` pivots at the cell midpoints `start + (i + 1/2) T / n`.
    pub fn pivots(interval: ExposureInterval, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid_argument("need at least one pivot"));
        }
        Self::new(pivot_positions(interval, n), interval)
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Keypoints in the normalized coordinate `[-1, 1]`.
    pub fn normalized(&self) -> Vec<f64> {
        self.timestamps
            .iter()
            .map(|&t| self.interval.normalize(t))
            .collect()
    }
}

fn pivot_positions(interval: ExposureInterval, n: usize) -> Vec<f64> {
    let cell = interval.duration() / n as f64;
    (0..n)
        .map(|i| interval.start() + (i as f64 + 0.5) * cell)
        .collect()
}

/// Picks `n` keypoints for one pixel from its event timestamps.
///
/// Pivots are visited left to right. Each one moves to its nearest event
/// timestamp (the earlier one on a tie) unless another pivot already took
/// that timestamp, in which case it stays put. Pixels without events keep
/// the bare pivots.
pub fn select_keypoints(
    event_times: &[f64],
    interval: ExposureInterval,
    n: usize,
) -> Result<KeypointSet> {
    if n < 2 {
        return Err(Error::invalid_argument(format!(
            "need at least 2 keypoints, got {n}"
        )));
    }
    if let Some(&t) = event_times.iter().find(|&&t| !interval.contains(t)) {
        return Err(Error::invalid_argument(format!(
            "event timestamp {t} lies outside [{}, {}]",
            interval.start(),
            interval.end()
        )));
    }

    let mut candidates = event_times.to_vec();
    if !candidates.is_sorted() {
        candidates.sort_by(f64::total_cmp);
    }
    candidates.dedup();
    let mut claimed = vec![false; candidates.len()];

    let mut keys = pivot_positions(interval, n);
    for key in keys.iter_mut() {
        if let Some(j) = nearest(&candidates, *key) {
            if !claimed[j] {
                claimed[j] = true;
                *key = candidates[j];
            }
        }
    }

    enforce_strict_increase(&mut keys, interval);
    KeypointSet::new(keys, interval)
}

/// Keypoints for every pixel of `events`, raster order.
pub fn select_keypoints_per_pixel(events: &EventStream, n: usize) -> Result<Vec<KeypointSet>> {
    let px = events.per_pixel();
    let interval = events.interval();
    (0..px.pixel_count())
        .into_par_iter()
        .map(|idx| select_keypoints(&px.timestamps(idx), interval, n))
        .collect()
}

/// Index of the entry of sorted `values` closest to `target`; ties go left.
fn nearest(values: &[f64], target: f64) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let right = values.partition_point(|&v| v < target);
    if right == 0 {
        return Some(0);
    }
    if right == values.len() {
        return Some(values.len() - 1);
    }
    let left = right - 1;
    if target - values[left] <= values[right] - target {
        Some(left)
    } else {
        Some(right)
    }
}

fn enforce_strict_increase(keys: &mut [f64], interval: ExposureInterval) {
    keys.sort_by(f64::total_cmp);
    let offset = interval.duration() * DEDUP_OFFSET;
    for i in 1..keys.len() {
        if keys[i] <= keys[i - 1] {
            keys[i] = keys[i - 1] + offset;
        }
    }
    // A forward push can run past the end; pull the tail back inside.
    let last = keys.len() - 1;
    if keys[last] > interval.end() {
        keys[last] = interval.end();
        for i in (0..last).rev() {
            if keys[i] >= keys[i + 1] {
                keys[i] = keys[i + 1] - offset;
            }
        }
    }
}
