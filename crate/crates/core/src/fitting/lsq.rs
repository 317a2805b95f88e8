use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::lagrange::basis_monomials;
use crate::repr::{horner, BlurryFrame, IntensityPoly, KeypointSet, PolyField};
use crate::sim::SharpVideo;

/// Ridge added to the normal equations when they are numerically singular.
pub const RIDGE: f64 = 1e-8;

/// Smallest accepted squared Cholesky pivot relative to the largest diagonal entry.
const PIVOT_FLOOR: f64 = 1e-14;

/// Result of [`fit_polys`].
#[derive(Debug, Clone)]
pub struct PolyFit {
    pub field: PolyField,
    /// Pixels whose normal equations needed the ridge term.
    pub regularized: Vec<bool>,
    /// Per-pixel root-mean-square frame residual after the blur constraint.
    pub rms_residual: Vec<f64>,
}

impl PolyFit {
    pub fn regularized_count(&self) -> usize {
        self.regularized.iter().filter(|&&r| r).count()
    }
}

/// Least-squares fit of one [`IntensityPoly`] per pixel to a sharp video.
///
/// Unknowns are the derivative values at the pixel's keypoints plus the
/// integration constant. The constant is then re-solved against the blurry
/// frame so the temporal average matches it exactly.
pub fn fit_polys(
    video: &SharpVideo,
    keypoints: &[KeypointSet],
    blurry: &BlurryFrame,
) -> Result<PolyFit> {
    let (w, h) = (video.width(), video.height());
    if keypoints.len() != w * h {
        return Err(Error::shape(
            format!("{} keypoint sets", w * h),
            keypoints.len(),
        ));
    }
    if blurry.width() != w || blurry.height() != h {
        return Err(Error::shape(
            format!("{w}x{h} blurry frame"),
            format!("{}x{}", blurry.width(), blurry.height()),
        ));
    }
    let interval = video.interval();
    if blurry.interval != interval {
        return Err(Error::invalid_argument(
            "blurry frame and video cover different exposures",
        ));
    }
    if let Some(k) = keypoints.iter().find(|k| k.interval() != interval) {
        return Err(Error::invalid_argument(format!(
            "keypoint interval [{}, {}] differs from the video exposure",
            k.interval().start(),
            k.interval().end()
        )));
    }
    let max_n = keypoints.iter().map(KeypointSet::len).max().unwrap_or(0);
    if video.len() < max_n {
        return Err(Error::InvalidInput(format!(
            "{} frames cannot determine {max_n} keypoint derivatives",
            video.len()
        )));
    }

    let taus: Vec<f64> = video
        .timestamps()
        .iter()
        .map(|&t| interval.normalize(t))
        .collect();
    let half = 0.5 * interval.duration();

    let fitted: Vec<(IntensityPoly, bool, f64)> = (0..w * h)
        .into_par_iter()
        .map(|idx| {
            let samples = video.pixel_series(idx);
            let ks = &keypoints[idx];
            let (scaled, _a, regularized) = solve_pixel(&ks.normalized(), &taus, &samples);
            let values = scaled.iter().map(|u| u / half).collect();
            let poly = IntensityPoly::new(ks.clone(), values, 0.0)
                .expect("one value per keypoint")
                .constrained_to_blur(blurry.frame.values()[idx]);
            let m = poly.to_monomial();
            let sq: f64 = taus
                .iter()
                .zip(&samples)
                .map(|(&tau, &y)| (m.eval_normalized(tau) - y).powi(2))
                .sum();
            (poly, regularized, (sq / samples.len() as f64).sqrt())
        })
        .collect();

    let mut polys = Vec::with_capacity(fitted.len());
    let mut regularized = Vec::with_capacity(fitted.len());
    let mut rms_residual = Vec::with_capacity(fitted.len());
    for (p, r, e) in fitted {
        polys.push(p);
        regularized.push(r);
        rms_residual.push(e);
    }
    Ok(PolyFit {
        field: PolyField::new(w, h, polys)?,
        regularized,
        rms_residual,
    })
}

/// Solves for derivative values in normalized-time units (`dL/dtau`) and the
/// constant. Returns `(values, constant, regularized)`.
fn solve_pixel(nodes: &[f64], taus: &[f64], samples: &[f64]) -> (Vec<f64>, f64, bool) {
    let n = nodes.len();
    let cols = n + 1;
    let integrated: Vec<Vec<f64>> = basis_monomials(nodes)
        .into_iter()
        .map(|b| {
            let mut p = Vec::with_capacity(b.len() + 1);
            p.push(0.0);
            p.extend(b.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
            p
        })
        .collect();

    let design = DMatrix::from_fn(taus.len(), cols, |r, c| {
        if c < n {
            horner(&integrated[c], taus[r])
        } else {
            1.0
        }
    });
    let rhs = DVector::from_column_slice(samples);
    let gram = design.transpose() * &design;
    let moment = design.transpose() * rhs;

    let max_diag = gram.diagonal().max();
    let well_posed = gram.clone().cholesky().filter(|ch| {
        let l = ch.l_dirty();
        (0..cols).all(|i| l[(i, i)] * l[(i, i)] > PIVOT_FLOOR * max_diag)
    });
    let (solution, regularized) = match well_posed {
        Some(ch) => (ch.solve(&moment), false),
        None => {
            let ridged = gram + DMatrix::identity(cols, cols) * RIDGE;
            let sol = ridged
                .cholesky()
                .map(|ch| ch.solve(&moment))
                .unwrap_or_else(|| DVector::zeros(cols));
            (sol, true)
        }
    };
    let values = solution.as_slice()[..n].to_vec();
    (values, solution[n], regularized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{ExposureInterval, Frame};
    use crate::sim::synthesize_blur;

    #[test]
    fn constant_video_fits_constant() {
        let iv = ExposureInterval::centered(0.12).unwrap();
        let v = SharpVideo::uniform(vec![Frame::filled(2, 2, 0.6); 12], iv).unwrap();
        let blurry = synthesize_blur(&v);
        let ks = vec![KeypointSet::pivots(iv, 5).unwrap(); 4];
        let fit = fit_polys(&v, &ks, &blurry).unwrap();
        for p in fit.field.polys() {
            assert!(p.derivative_values().iter().all(|d| d.abs() < 1e-9));
            assert!((p.integration_constant() - 0.6).abs() < 1e-12);
        }
        assert_eq!(fit.regularized_count(), 0);
    }

    #[test]
    fn too_few_frames_rejected() {
        let iv = ExposureInterval::centered(0.12).unwrap();
        let v = SharpVideo::uniform(vec![Frame::filled(1, 1, 0.6); 3], iv).unwrap();
        let ks = vec![KeypointSet::pivots(iv, 5).unwrap()];
        assert!(fit_polys(&v, &ks, &synthesize_blur(&v)).is_err());
    }

    #[test]
    fn underdetermined_pixel_is_ridged() {
        // n keypoints give n + 1 unknowns; n frames cannot pin them all.
        let iv = ExposureInterval::centered(1.0).unwrap();
        let frames = (0..4)
            .map(|k| Frame::filled(1, 1, 0.2 + 0.1 * k as f64))
            .collect();
        let v = SharpVideo::uniform(frames, iv).unwrap();
        let ks = vec![KeypointSet::pivots(iv, 4).unwrap()];
        let fit = fit_polys(&v, &ks, &synthesize_blur(&v)).unwrap();
        assert_eq!(fit.regularized, vec![true]);
        assert!(fit.field.polys()[0].eval_primitive(0.0).is_finite());
    }
}
