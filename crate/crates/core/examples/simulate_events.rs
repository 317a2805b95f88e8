// Simulates an event camera and a blurry exposure from a high frame rate
// clip, then bins the events into a voxel grid.

use ecir::repr::{ExposureInterval, Frame};
use ecir::sim::{simulate_events, synthesize_blur, voxelize, SharpVideo, ThresholdConfig};

fn main() -> ecir::Result<()> {
    let exposure = ExposureInterval::centered(0.12)?;
    let (width, height) = (32, 24);
    let frames = exposure
        .uniform_timestamps(116)
        .into_iter()
        .map(|t| {
            let shift = (t - exposure.start()) / exposure.duration() * 12.0;
            Frame::from_fn(width, height, |x, _| {
                // A bright bar moving right.
                let d = x as f64 - 8.0 - shift;
                0.15 + 0.7 * (-d * d / 8.0).exp()
            })
        })
        .collect();
    let video = SharpVideo::uniform(frames, exposure)?;

    let cfg = ThresholdConfig {
        sigma: 0.03,
        seed: 7,
        ..ThresholdConfig::symmetric(0.2)
    };
    let events = simulate_events(&video, &cfg)?;
    let positive = events.events().iter().filter(|e| e.p.sign() > 0).count();
    println!(
        "{} events ({positive} positive) from {} frames",
        events.len(),
        video.len()
    );

    let blurry = synthesize_blur(&video);
    println!("blurry row 0: {:.3?}", &blurry.frame.values()[..12]);

    let grid = voxelize(&events, 8)?;
    for bin in 0..grid.bins() {
        let total: f64 = grid.planes()[bin].values().iter().map(|v| v.abs()).sum();
        println!("  bin {bin}: {total} events");
    }
    Ok(())
}
