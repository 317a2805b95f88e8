use crate::error::{Error, Result};
use crate::repr::{EventStream, ExposureInterval, Frame};

/// Default temporal bin count.
pub const DEFAULT_BINS: usize = 40;

/// `m x h x w` signed event counts over equal temporal bins.
#[derive(Debug, Clone, PartialEq)]
pub struct EventHistogram {
    bins: usize,
    width: usize,
    height: usize,
    counts: Vec<f64>,
    interval: ExposureInterval,
}

impl EventHistogram {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    /// Flat `[bin][y][x]` storage.
    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn get(&self, bin: usize, x: usize, y: usize) -> f64 {
        self.counts[(bin * self.height + y) * self.width + x]
    }

    /// One frame per bin.
    pub fn planes(&self) -> Vec<Frame> {
        self.counts
            .chunks(self.width * self.height)
            .map(|c| Frame::new(self.width, self.height, c.to_vec()).expect("plane shape"))
            .collect()
    }

    /// Sum over bins per pixel.
    pub fn signed_total(&self) -> Frame {
        let plane = self.width * self.height;
        let mut acc = vec![0.0; plane];
        for chunk in self.counts.chunks(plane) {
            acc.iter_mut().zip(chunk).for_each(|(a, c)| *a += c);
        }
        Frame::new(self.width, self.height, acc).expect("plane shape")
    }
}

/// Bin index of `t`: `floor((t - start) / T * m)`, with `t = end` folded
/// into the last bin.
pub fn bin_index(t: f64, interval: ExposureInterval, bins: usize) -> usize {
    let pos = ((t - interval.start()) / interval.duration() * bins as f64).floor();
    if pos <= 0.0 {
        0
    } else {
        (pos as usize).min(bins - 1)
    }
}

pub fn voxelize(events: &EventStream, bins: usize) -> Result<EventHistogram> {
    if bins == 0 {
        return Err(Error::invalid_argument("histogram needs at least one bin"));
    }
    let (w, h) = (events.width(), events.height());
    let iv = events.interval();
    let mut counts = vec![0.0; bins * w * h];
    for e in events.events() {
        let b = bin_index(e.t, iv, bins);
        counts[(b * h + e.y as usize) * w + e.x as usize] += f64::from(e.p.sign());
    }
    Ok(EventHistogram {
        bins,
        width: w,
        height: h,
        counts,
        interval: iv,
    })
}

/// Per-pixel signed polarity sum over `(t_a, t_b]`.
///
/// The lower end is closed when `t_a` is the interval start, so the full
/// interval agrees with the histogram total.
pub fn signed_count_between(events: &EventStream, t_a: f64, t_b: f64) -> Result<Frame> {
    if t_a > t_b {
        return Err(Error::invalid_argument(format!(
            "signed count window is reversed: {t_a} > {t_b}"
        )));
    }
    let iv = events.interval();
    iv.check(t_a)?;
    iv.check(t_b)?;
    let (w, h) = (events.width(), events.height());
    let mut acc = vec![0.0; w * h];
    let evs = events.events();
    let lo = if t_a <= iv.start() {
        0
    } else {
        evs.partition_point(|e| e.t <= t_a)
    };
    let hi = evs.partition_point(|e| e.t <= t_b);
    if lo < hi {
        for e in &evs[lo..hi] {
            acc[e.y as usize * w + e.x as usize] += f64::from(e.p.sign());
        }
    }
    Frame::new(w, h, acc)
}
