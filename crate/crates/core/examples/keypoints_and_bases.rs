// Picks keypoints from a pixel's event times, evaluates the Lagrange
// bases, and builds an intensity polynomial whose temporal average matches
// a blurry pixel value.

use ecir::repr::{lagrange_basis, select_keypoints, ExposureInterval, IntensityPoly};

fn main() -> ecir::Result<()> {
    let exposure = ExposureInterval::centered(0.12)?;
    let events = [-0.041, -0.0405, 0.002, 0.017, 0.05];
    let keypoints = select_keypoints(&events, exposure, 6)?;
    println!("keypoints: {:?}", keypoints.timestamps());

    let t = 0.01;
    let bases: Vec<f64> = (0..keypoints.len())
        .map(|i| lagrange_basis(&keypoints, i, t))
        .collect::<ecir::Result<_>>()?;
    println!(
        "bases at t={t}: {bases:.4?} (sum {:.12})",
        bases.iter().sum::<f64>()
    );

    // Brightening with a dip in the middle of the exposure.
    let slopes = keypoints
        .timestamps()
        .iter()
        .map(|&t| 4.0 - 900.0 * t * t)
        .collect();
    let poly = IntensityPoly::new(keypoints, slopes, 0.0)?.constrained_to_blur(0.42);
    println!("blur mean {:.12}", poly.blur_mean());
    for t in exposure.uniform_timestamps(5) {
        println!(
            "  L({t:+.3}) = {:.4}   dL/dt = {:+.3}",
            poly.eval_primitive(t),
            poly.eval_derivative(t)
        );
    }
    Ok(())
}
