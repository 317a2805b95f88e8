use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::repr::ExposureInterval;

/// Sign of a log-intensity change that triggered an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Negative => -1,
            Polarity::Positive => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Self> {
        match sign {
            1 => Some(Polarity::Positive),
            -1 => Some(Polarity::Negative),
            _ => None,
        }
    }

    #[must_use]
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Negative => Polarity::Positive,
            Polarity::Positive => Polarity::Negative,
        }
    }
}

/// A single `(x, y, t, p)` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: u32,
    pub y: u32,
    pub t: f64,
    pub p: Polarity,
}

impl Event {
    pub fn new(x: u32, y: u32, t: f64, p: Polarity) -> Self {
        Self { x, y, t, p }
    }

    /// Total order used for every merged stream: `(t, y, x, p)`.
    pub fn stream_order(&self, other: &Self) -> Ordering {
        self.t
            .total_cmp(&other.t)
            .then(self.y.cmp(&other.y))
            .then(self.x.cmp(&other.x))
            .then(self.p.cmp(&other.p))
    }
}

/// Events observed by a `width x height` sensor during one exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    events: Vec<Event>,
    interval: ExposureInterval,
    width: usize,
    height: usize,
}

impl EventStream {
    /// Validates ordering, bounds and timestamps.
    pub fn new(
        events: Vec<Event>,
        interval: ExposureInterval,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            if !e.t.is_finite() || !interval.contains(e.t) {
                return Err(Error::Validation(format!(
                    "event {i} at t={} lies outside [{}, {}]",
                    e.t,
                    interval.start(),
                    interval.end()
                )));
            }
            if e.x as usize >= width || e.y as usize >= height {
                return Err(Error::Validation(format!(
                    "event {i} at ({}, {}) lies outside the {width}x{height} sensor",
                    e.x, e.y
                )));
            }
        }
        if let Some(i) = events.windows(2).position(|w| w[1].t < w[0].t) {
            return Err(Error::Validation(format!(
                "events are not sorted by time (event {} at t={} precedes t={})",
                i + 1,
                events[i].t,
                events[i + 1].t
            )));
        }
        Ok(Self {
            events,
            interval,
            width,
            height,
        })
    }

    /// Sorts by `(t, y, x, p)` before validating.
    pub fn from_unsorted(
        mut events: Vec<Event>,
        interval: ExposureInterval,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        events.sort_by(Event::stream_order);
        Self::new(events, interval, width, height)
    }

    pub fn empty(interval: ExposureInterval, width: usize, height: usize) -> Self {
        Self {
            events: Vec::new(),
            interval,
            width,
            height,
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    /// Groups events by pixel in raster order; each list stays sorted by time.
    pub fn per_pixel(&self) -> PixelEvents {
        let mut lists = vec![Vec::new(); self.width * self.height];
        for e in &self.events {
            lists[e.y as usize * self.width + e.x as usize].push((e.t, e.p.sign()));
        }
        PixelEvents {
            lists,
            interval: self.interval,
            width: self.width,
            height: self.height,
        }
    }
}

/// Per-pixel `(t, sign)` lists, raster-ordered.
#[derive(Debug, Clone)]
pub struct PixelEvents {
    lists: Vec<Vec<(f64, i8)>>,
    interval: ExposureInterval,
    width: usize,
    height: usize,
}

impl PixelEvents {
    pub fn at(&self, index: usize) -> &[(f64, i8)] {
        &self.lists[index]
    }

    pub fn timestamps(&self, index: usize) -> Vec<f64> {
        self.lists[index].iter().map(|&(t, _)| t).collect()
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.lists.len()
    }

    /// Signed polarity sum of pixel `index` over `(t_a, t_b]`, closed at the
    /// interval start so that an event exactly at `start` is never dropped.
    pub fn signed_count(&self, index: usize, t_a: f64, t_b: f64) -> i64 {
        let list = &self.lists[index];
        let lo = if t_a <= self.interval.start() {
            list.partition_point(|&(t, _)| t < t_a)
        } else {
            list.partition_point(|&(t, _)| t <= t_a)
        };
        let hi = list.partition_point(|&(t, _)| t <= t_b);
        if hi <= lo {
            return 0;
        }
        list[lo..hi].iter().map(|&(_, s)| s as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv() -> ExposureInterval {
        ExposureInterval::new(-0.5, 0.5).unwrap()
    }

    #[test]
    fn rejects_unsorted_and_out_of_bounds() {
        let a = Event::new(0, 0, 0.1, Polarity::Positive);
        let b = Event::new(0, 0, -0.1, Polarity::Positive);
        assert!(matches!(
            EventStream::new(vec![a, b], iv(), 1, 1),
            Err(Error::Validation(_))
        ));
        assert!(EventStream::from_unsorted(vec![a, b], iv(), 1, 1).is_ok());
        let far = Event::new(0, 0, 0.6, Polarity::Positive);
        assert!(EventStream::new(vec![far], iv(), 1, 1).is_err());
        let off = Event::new(2, 0, 0.0, Polarity::Positive);
        assert!(EventStream::new(vec![off], iv(), 2, 1).is_err());
    }

    #[test]
    fn stream_order_breaks_ties() {
        let mut v = [
            Event::new(1, 0, 0.0, Polarity::Positive),
            Event::new(0, 1, 0.0, Polarity::Positive),
            Event::new(0, 0, 0.0, Polarity::Positive),
            Event::new(0, 0, 0.0, Polarity::Negative),
        ];
        v.sort_by(Event::stream_order);
        assert_eq!(
            v.iter().map(|e| (e.x, e.y, e.p.sign())).collect::<Vec<_>>(),
            vec![(0, 0, -1), (0, 0, 1), (1, 0, 1), (0, 1, 1)]
        );
    }

    #[test]
    fn signed_count_half_open() {
        let s = EventStream::new(
            vec![
                Event::new(0, 0, -0.5, Polarity::Positive),
                Event::new(0, 0, 0.0, Polarity::Positive),
                Event::new(0, 0, 0.25, Polarity::Negative),
            ],
            iv(),
            1,
            1,
        )
        .unwrap();
        let px = s.per_pixel();
        assert_eq!(px.signed_count(0, -0.5, 0.5), 1);
        assert_eq!(px.signed_count(0, 0.0, 0.25), -1);
        assert_eq!(px.signed_count(0, -0.1, 0.0), 1);
        assert_eq!(px.signed_count(0, 0.1, 0.1), 0);
    }
}
