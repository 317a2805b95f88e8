// Reconstructs sharp frames from a blurry frame and its events with the
// double-integral baseline.

use ecir::fitting::edi_reconstruct_frames;
use ecir::metrics::mse;
use ecir::repr::{ExposureInterval, Frame};
use ecir::sim::{simulate_events, synthesize_blur, SharpVideo, ThresholdConfig};

fn main() -> ecir::Result<()> {
    let exposure = ExposureInterval::centered(0.12)?;
    let (width, height) = (24, 16);
    let frame_at = |t: f64| {
        let s = (t - exposure.start()) / exposure.duration();
        Frame::from_fn(width, height, |x, y| {
            0.2 + 0.6 * ((x + y) as f64 / 8.0 + 3.0 * s).sin().powi(2)
        })
    };
    let frames = exposure
        .uniform_timestamps(116)
        .into_iter()
        .map(frame_at)
        .collect();
    let video = SharpVideo::uniform(frames, exposure)?;
    let c = 0.15;
    let events = simulate_events(&video, &ThresholdConfig::symmetric(c))?;
    let blurry = synthesize_blur(&video);

    let targets = exposure.uniform_timestamps(7);
    let sharp = edi_reconstruct_frames(&blurry, &events, c, &targets)?;
    for (t, f) in targets.iter().zip(&sharp) {
        let truth = frame_at(*t);
        println!(
            "t={t:+.3}  EDI MSE {:.2e}  blurry MSE {:.2e}",
            mse(f, &truth)?,
            mse(&blurry.frame, &truth)?
        );
    }
    Ok(())
}
