#![allow(dead_code)]

use ecir::refine::{RefineProblem, ResidualStack};
use ecir::repr::{Event, EventStream, ExposureInterval, Frame, MonomialPoly, Polarity};
use ecir::sim::SharpVideo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn exposure() -> ExposureInterval {
    ExposureInterval::centered(0.12).unwrap()
}

/// Random per-pixel intensity polynomials of `degree` in normalized time,
/// kept inside roughly [0.07, 0.93].
pub fn random_poly_scene(
    width: usize,
    height: usize,
    degree: usize,
    interval: ExposureInterval,
    seed: u64,
) -> Vec<MonomialPoly> {
    let mut r = rng(seed);
    (0..width * height)
        .map(|_| {
            let mut c = vec![0.5 + r.random_range(-0.1..0.1)];
            for k in 1..=degree {
                c.push(r.random_range(-1.0..1.0) * 0.2 / (k * k) as f64);
            }
            MonomialPoly::new(c, interval).unwrap()
        })
        .collect()
}

pub fn sample_polys(polys: &[MonomialPoly], width: usize, height: usize, t: f64) -> Frame {
    Frame::new(width, height, polys.iter().map(|p| p.eval(t)).collect()).unwrap()
}

pub fn poly_video(
    polys: &[MonomialPoly],
    width: usize,
    height: usize,
    frames: usize,
    interval: ExposureInterval,
) -> SharpVideo {
    let ts = interval.uniform_timestamps(frames);
    let fs = ts
        .iter()
        .map(|&t| sample_polys(polys, width, height, t))
        .collect();
    SharpVideo::new(ts, fs, interval).unwrap()
}

/// A sinusoidal grating drifting one wavelength across the exposure, with a
/// slow vertical modulation. Intensities stay in [0.15, 0.85].
pub fn drifting_grating(x: usize, y: usize, t: f64, interval: ExposureInterval) -> f64 {
    let s = (t - interval.start()) / interval.duration();
    let phase = 2.0 * std::f64::consts::PI * (x as f64 / 24.0 - s);
    0.5 + 0.35 * phase.sin() * (0.6 + 0.4 * (y as f64 / 17.0).cos())
}

pub fn grating_frame(width: usize, height: usize, t: f64, interval: ExposureInterval) -> Frame {
    Frame::from_fn(width, height, |x, y| drifting_grating(x, y, t, interval))
}

pub fn grating_video(
    width: usize,
    height: usize,
    frames: usize,
    interval: ExposureInterval,
) -> SharpVideo {
    let ts = interval.uniform_timestamps(frames);
    let fs = ts
        .iter()
        .map(|&t| grating_frame(width, height, t, interval))
        .collect();
    SharpVideo::new(ts, fs, interval).unwrap()
}

/// Strictly increasing random keypoints inside `interval`, separated by at
/// least `min_gap` of the duration.
pub fn random_keypoints(
    r: &mut impl Rng,
    n: usize,
    interval: ExposureInterval,
    min_gap: f64,
) -> Vec<f64> {
    loop {
        let mut ts: Vec<f64> = (0..n)
            .map(|_| interval.start() + r.random::<f64>() * interval.duration())
            .collect();
        ts.sort_by(f64::total_cmp);
        if ts
            .windows(2)
            .all(|w| w[1] - w[0] > min_gap * interval.duration())
        {
            return ts;
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub fn max_abs_diff(a: &Frame, b: &Frame) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Uniformly random events, sorted into stream order.
pub fn random_stream(
    r: &mut impl Rng,
    count: usize,
    width: usize,
    height: usize,
    interval: ExposureInterval,
) -> EventStream {
    let events = (0..count)
        .map(|_| {
            let p = if r.random::<bool>() {
                Polarity::Positive
            } else {
                Polarity::Negative
            };
            Event::new(
                r.random_range(0..width as u32),
                r.random_range(0..height as u32),
                interval.start() + r.random::<f64>() * interval.duration(),
                p,
            )
        })
        .collect();
    EventStream::from_unsorted(events, interval, width, height).unwrap()
}

pub fn random_frames(
    r: &mut impl Rng,
    count: usize,
    width: usize,
    height: usize,
    scale: f64,
) -> Vec<Frame> {
    (0..count)
        .map(|_| Frame::from_fn(width, height, |_, _| r.random_range(-1.0..1.0) * scale))
        .collect()
}

/// A refinement problem with frames in [0, 1] and residuals of magnitude <= 0.2.
pub fn random_refine_problem(
    r: &mut impl Rng,
    d: usize,
    width: usize,
    height: usize,
    lambda: f64,
) -> RefineProblem {
    let initial = (0..d)
        .map(|_| Frame::from_fn(width, height, |_, _| r.random::<f64>()))
        .collect();
    let residuals = ResidualStack::new(random_frames(r, d - 1, width, height, 0.2)).unwrap();
    RefineProblem::new(initial, residuals, lambda).unwrap()
}
