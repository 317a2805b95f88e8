//! Frame quality metrics and the training-loss functionals.

mod losses;
mod quality;

pub use losses::{
    loss_derivative, loss_primitive, loss_refinement, loss_residual, loss_total, LossComponents,
    LossConfig,
};
pub use quality::{
    gaussian_taps, mse, psnr, psnr_from_mse, ssim, PSNR_CAP_DB, SSIM_K1, SSIM_K2, SSIM_SIGMA,
    SSIM_WINDOW,
};
