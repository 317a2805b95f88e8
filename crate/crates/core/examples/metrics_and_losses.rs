// Frame quality metrics and the weighted training losses.

use ecir::metrics::{
    loss_derivative, loss_primitive, loss_refinement, loss_residual, loss_total, mse, psnr, ssim,
    LossComponents, LossConfig,
};
use ecir::refine::ResidualStack;
use ecir::repr::Frame;

fn main() -> ecir::Result<()> {
    let reference = Frame::from_fn(32, 32, |x, y| ((x * y) % 17) as f64 / 16.0);
    let noisy = Frame::from_fn(32, 32, |x, y| {
        let v = reference.get(x, y) + if (x + y) % 2 == 0 { 0.03 } else { -0.03 };
        v.clamp(0.0, 1.0)
    });
    println!(
        "MSE {:.5}  PSNR {:.2} dB  SSIM {:.4}",
        mse(&reference, &noisy)?,
        psnr(&reference, &noisy)?,
        ssim(&reference, &noisy)?
    );

    let gt = vec![reference.clone(), reference.clone()];
    let pred = vec![noisy.clone(), reference.clone()];
    let residual_gt = ResidualStack::consistent_with(&gt)?;
    let residual_pred = ResidualStack::consistent_with(&pred)?;
    let cfg = LossConfig::default();
    let parts = LossComponents {
        derivative: loss_derivative(&gt, &pred)?,
        primitive: loss_primitive(&gt, &pred)?,
        refinement: loss_refinement(&gt, &pred)?,
        residual: loss_residual(&residual_gt, &residual_pred, cfg.rho)?,
    };
    println!("{parts:?}");
    println!("total {:.5}", loss_total(&parts, &cfg));
    Ok(())
}
