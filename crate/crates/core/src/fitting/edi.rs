use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::{BlurryFrame, EventStream, Frame};

/// Default contrast threshold assumed by the baseline.
pub const DEFAULT_EDI_THRESHOLD: f64 = 0.2;

/// Double-integral reconstruction at a single timestamp.
pub fn edi_reconstruct(
    blurry: &BlurryFrame,
    events: &EventStream,
    c: f64,
    t: f64,
) -> Result<Frame> {
    Ok(edi_reconstruct_frames(blurry, events, c, &[t])?
        .pop()
        .expect("one timestamp"))
}

/// Reconstructs `L(t) = B T E(t) / ∫ E`, `E(s) = exp(c S(start, s))`, at
/// each timestamp. `E` is piecewise constant between events, so the
/// integral is an exact finite sum.
pub fn edi_reconstruct_frames(
    blurry: &BlurryFrame,
    events: &EventStream,
    c: f64,
    timestamps: &[f64],
) -> Result<Vec<Frame>> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid_argument(format!(
            "EDI threshold must be positive, got {c}"
        )));
    }
    let (w, h) = (blurry.width(), blurry.height());
    if events.width() != w || events.height() != h {
        return Err(Error::shape(
            format!("{w}x{h} events"),
            format!("{}x{}", events.width(), events.height()),
        ));
    }
    let iv = blurry.interval;
    for &t in timestamps {
        iv.check(t)?;
    }
    let per_pixel = events.per_pixel();

    let columns: Vec<Vec<f64>> = (0..w * h)
        .into_par_iter()
        .map(|idx| {
            let list = per_pixel.at(idx);
            // Running counts after each event, plus the segment boundaries.
            let mut bounds = Vec::with_capacity(list.len() + 2);
            let mut counts = Vec::with_capacity(list.len() + 1);
            let mut s = 0i64;
            bounds.push(iv.start());
            counts.push(0i64);
            for &(t, p) in list {
                s += p as i64;
                if t <= iv.start() {
                    *counts.last_mut().unwrap() = s;
                } else {
                    bounds.push(t);
                    counts.push(s);
                }
            }
            bounds.push(iv.end());
            let peak = *counts.iter().max().unwrap();
            let integral: f64 = counts
                .iter()
                .enumerate()
                .map(|(k, &sk)| (c * (sk - peak) as f64).exp() * (bounds[k + 1] - bounds[k]))
                .sum();
            let b = blurry.frame.values()[idx];
            let scale = b * iv.duration() / integral;
            timestamps
                .iter()
                .map(|&t| {
                    // Segment k covers (bounds[k], bounds[k + 1]].
                    let k = bounds[1..bounds.len() - 1].partition_point(|&e| e <= t);
                    scale * (c * (counts[k] - peak) as f64).exp()
                })
                .collect()
        })
        .collect();

    Ok((0..timestamps.len())
        .map(|k| {
            let values = columns.iter().map(|col| col[k]).collect();
            Frame::new(w, h, values).expect("shape checked")
        })
        .collect())
}
