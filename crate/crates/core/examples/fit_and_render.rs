// Fits one polynomial per pixel to a sharp clip, using keypoints derived
// from simulated events, and renders latent frames at new timestamps.

use ecir::fitting::fit_polys;
use ecir::metrics::psnr;
use ecir::repr::{select_keypoints_per_pixel, ExposureInterval, Frame};
use ecir::sim::{simulate_events, synthesize_blur, SharpVideo, ThresholdConfig};

fn scene(t: f64, exposure: ExposureInterval, width: usize, height: usize) -> Frame {
    let s = (t - exposure.start()) / exposure.duration();
    Frame::from_fn(width, height, |x, y| {
        let phase = 2.0 * std::f64::consts::PI * (x as f64 / 16.0 - 0.8 * s);
        0.5 + 0.3 * phase.sin() * (1.0 - y as f64 / 40.0)
    })
}

fn main() -> ecir::Result<()> {
    let exposure = ExposureInterval::centered(0.12)?;
    let (width, height) = (40, 30);
    let times = exposure.uniform_timestamps(116);
    let frames = times
        .iter()
        .map(|&t| scene(t, exposure, width, height))
        .collect();
    let video = SharpVideo::new(times, frames, exposure)?;

    let events = simulate_events(&video, &ThresholdConfig::default())?;
    let blurry = synthesize_blur(&video);
    let keypoints = select_keypoints_per_pixel(&events, 10)?;
    let fit = fit_polys(&video, &keypoints, &blurry)?;
    println!(
        "{} pixels fitted, {} regularized",
        fit.rms_residual.len(),
        fit.regularized_count()
    );

    let targets = exposure.uniform_timestamps(14);
    let rendered = fit.field.render_frames(&targets)?;
    for (t, frame) in targets.iter().zip(&rendered) {
        let truth = scene(*t, exposure, width, height);
        println!(
            "t={t:+.4}  PSNR {:.1} dB (blurry {:.1} dB)",
            psnr(&frame.clamped(), &truth)?,
            psnr(&blurry.frame, &truth)?
        );
    }
    Ok(())
}
