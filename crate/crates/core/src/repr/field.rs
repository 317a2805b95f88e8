use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::{ExposureInterval, Frame, IntensityPoly};

/// One [`IntensityPoly`] per pixel, raster order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField {
    width: usize,
    height: usize,
    interval: ExposureInterval,
    polys: Vec<IntensityPoly>,
}

impl PolyField {
    pub fn new(width: usize, height: usize, polys: Vec<IntensityPoly>) -> Result<Self> {
        if polys.len() != width * height {
            return Err(Error::shape(
                format!("{} polynomials for {width}x{height}", width * height),
                polys.len(),
            ));
        }
        let Some(first) = polys.first() else {
            return Err(Error::invalid_argument("empty polynomial field"));
        };
        let interval = first.interval();
        if polys.iter().any(|p| p.interval() != interval) {
            return Err(Error::invalid_argument(
                "all pixels must share one exposure interval",
            ));
        }
        Ok(Self {
            width,
            height,
            interval,
            polys,
        })
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

    pub fn polys(&self) -> &[IntensityPoly] {
        &self.polys
    }

    pub fn get(&self, x: usize, y: usize) -> &IntensityPoly {
        &self.polys[y * self.width + x]
    }

    /// Latent frame at `t`, unclamped.
    pub fn render_frame(&self, t: f64) -> Result<Frame> {
        Ok(self.render_frames(&[t])?.pop().expect("one timestamp"))
    }

    /// Latent frames at each of `timestamps`, unclamped.
    ///
    /// Each pixel's monomial form is built once and shared by every timestamp.
    pub fn render_frames(&self, timestamps: &[f64]) -> Result<Vec<Frame>> {
        for &t in timestamps {
            self.interval.check(t)?;
        }
        let taus: Vec<f64> = timestamps
            .iter()
            .map(|&t| self.interval.normalize(t))
            .collect();
        let per_pixel: Vec<Vec<f64>> = self
            .polys
            .par_iter()
            .map(|p| {
                let m = p.to_monomial();
                taus.iter().map(|&tau| m.eval_normalized(tau)).collect()
            })
            .collect();
        Ok((0..timestamps.len())
            .map(|k| {
                let values = per_pixel.iter().map(|v| v[k]).collect();
                Frame::new(self.width, self.height, values).expect("shape checked")
            })
            .collect())
    }

    /// Per-keypoint derivative planes (`n` frames), for the derivative loss.
    pub fn derivative_planes(&self) -> Result<Vec<Frame>> {
        let n = self.polys[0].degree();
        if self.polys.iter().any(|p| p.degree() != n) {
            return Err(Error::invalid_argument(
                "pixels carry different keypoint counts",
            ));
        }
        Ok((0..n)
            .map(|i| {
                let values = self
                    .polys
                    .iter()
                    .map(|p| p.derivative_values()[i])
                    .collect();
                Frame::new(self.width, self.height, values).expect("shape checked")
            })
            .collect())
    }
}
