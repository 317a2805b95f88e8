use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::{mse, psnr_from_mse, ssim, SSIM_WINDOW};
use crate::repr::Frame;

#[derive(Debug, Clone, PartialEq)]
pub struct FrameScore {
    pub mse: f64,
    pub psnr: f64,
    /// `None` when the frame is smaller than the SSIM window.
    pub ssim: Option<f64>,
}

/// Per-frame and aggregate quality of a predicted sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub frames: Vec<FrameScore>,
}

impl EvalReport {
    pub fn compute(pred: &[Frame], gt: &[Frame]) -> Result<Self> {
        if pred.len() != gt.len() {
            return Err(Error::shape(
                format!("{} ground-truth frames", gt.len()),
                format!("{} predicted frames", pred.len()),
            ));
        }
        if pred.is_empty() {
            return Err(Error::InvalidInput("nothing to evaluate".into()));
        }
        let frames = pred
            .iter()
            .zip(gt)
            .map(|(p, g)| {
                let m = mse(p, g)?;
                let s = if p.width() >= SSIM_WINDOW && p.height() >= SSIM_WINDOW {
                    Some(ssim(p, g)?)
                } else {
                    None
                };
                Ok(FrameScore {
                    mse: m,
                    psnr: psnr_from_mse(m),
                    ssim: s,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { frames })
    }

    pub fn mean_mse(&self) -> f64 {
        self.frames.iter().map(|f| f.mse).sum::<f64>() / self.frames.len() as f64
    }

    pub fn mean_psnr(&self) -> f64 {
        self.frames.iter().map(|f| f.psnr).sum::<f64>() / self.frames.len() as f64
    }

    pub fn mean_ssim(&self) -> Option<f64> {
        let vals: Option<Vec<f64>> = self.frames.iter().map(|f| f.ssim).collect();
        vals.map(|v| v.iter().sum::<f64>() / v.len() as f64)
    }

    /// Plain-text `key=value` lines with fixed precision.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        writeln!(out, "frames={}", self.frames.len()).unwrap();
        writeln!(out, "mean_mse={:.12}", self.mean_mse()).unwrap();
        writeln!(out, "mean_psnr={:.6}", self.mean_psnr()).unwrap();
        writeln!(out, "mean_ssim={}", fmt_ssim(self.mean_ssim())).unwrap();
        for (i, f) in self.frames.iter().enumerate() {
            writeln!(out, "frame_{i:04}.mse={:.12}", f.mse).unwrap();
            writeln!(out, "frame_{i:04}.psnr={:.6}", f.psnr).unwrap();
            writeln!(out, "frame_{i:04}.ssim={}", fmt_ssim(f.ssim)).unwrap();
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame,mse,psnr,ssim\n");
        for (i, f) in self.frames.iter().enumerate() {
            writeln!(out, "{i},{:.12},{:.6},{}", f.mse, f.psnr, fmt_ssim(f.ssim)).unwrap();
        }
        out
    }
}

fn fmt_ssim(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |s| format!("{s:.9}"))
}

/// Reads `key=value` report text back into a map, for comparisons.
pub fn parse_key_value(text: &str) -> std::collections::BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
