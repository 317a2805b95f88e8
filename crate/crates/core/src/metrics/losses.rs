use crate::error::{Error, Result};
use crate::refine::ResidualStack;
use crate::repr::Frame;

/// Weights of the four loss terms and the residual-loss sharpness `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    pub lambda_d: f64,
    pub lambda_p: f64,
    pub lambda_ref: f64,
    pub lambda_res: f64,
    pub rho: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            lambda_d: 1.0,
            lambda_p: 10.0,
            lambda_ref: 10.0,
            lambda_res: 0.5,
            rho: 5.0,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        let ws = [
            self.lambda_d,
            self.lambda_p,
            self.lambda_ref,
            self.lambda_res,
        ];
        if ws.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::invalid_argument(format!(
                "loss weights must be non-negative, got {ws:?}"
            )));
        }
        Ok(())
    }
}

/// Individual loss values fed to [`loss_total`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossComponents {
    pub derivative: f64,
    pub primitive: f64,
    pub refinement: f64,
    pub residual: f64,
}

fn check_stacks(gt: &[Frame], pred: &[Frame]) -> Result<()> {
    if gt.len() != pred.len() {
        return Err(Error::shape(format!("{} planes", gt.len()), pred.len()));
    }
    if gt.is_empty() {
        return Err(Error::invalid_argument("loss over an empty stack"));
    }
    for (g, p) in gt.iter().zip(pred) {
        g.ensure_same_shape(p)?;
    }
    Ok(())
}

fn abs_sum(a: &Frame, b: &Frame) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum()
}

/// Mean absolute difference over all `n x h x w` derivative values.
pub fn loss_derivative(gt: &[Frame], pred: &[Frame]) -> Result<f64> {
    check_stacks(gt, pred)?;
    let count: usize = gt.iter().map(Frame::len).sum();
    let total: f64 = gt
        .iter()
        .zip(pred)
        .flat_map(|(g, p)| g.values().iter().zip(p.values()))
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(total / count as f64)
}

/// Mean absolute difference over all `d x h x w` rendered intensities.
pub fn loss_primitive(gt: &[Frame], pred: &[Frame]) -> Result<f64> {
    loss_derivative(gt, pred)
}

/// Sum over timestamps of the per-frame mean absolute difference.
pub fn loss_refinement(gt: &[Frame], pred: &[Frame]) -> Result<f64> {
    check_stacks(gt, pred)?;
    Ok(gt
        .iter()
        .zip(pred)
        .map(|(g, p)| abs_sum(g, p) / g.len() as f64)
        .sum())
}

/// `Σ_i mean(exp(ρ |R_gt|) · |R_gt − R_pred|)`.
pub fn loss_residual(gt: &ResidualStack, pred: &ResidualStack, rho: f64) -> Result<f64> {
    check_stacks(gt.frames(), pred.frames())?;
    Ok(gt
        .frames()
        .iter()
        .zip(pred.frames())
        .map(|(g, p)| {
            let s: f64 = g
                .values()
                .iter()
                .zip(p.values())
                .map(|(a, b)| (rho * a.abs()).exp() * (a - b).abs())
                .sum();
            s / g.len() as f64
        })
        .sum())
}

pub fn loss_total(components: &LossComponents, cfg: &LossConfig) -> f64 {
    cfg.lambda_d * components.derivative
        + cfg.lambda_p * components.primitive
        + cfg.lambda_ref * components.refinement
        + cfg.lambda_res * components.residual
}
