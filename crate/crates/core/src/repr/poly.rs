use crate::error::{Error, Result};
use crate::repr::lagrange::{interpolant_monomial, interpolate};
use crate::repr::{ExposureInterval, KeypointSet};

/// Continuous intensity of one pixel.
///
/// The derivative `dL/dt` is the Lagrange interpolant of `derivative_values`
/// on the keypoints; the intensity is its exact antiderivative plus the
/// integration constant. The antiderivative is anchored at the interval
/// midpoint (normalized time 0), so the constant is the intensity there
/// when the derivative vanishes and equals the constant term of the
/// monomial form.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityPoly {
    keypoints: KeypointSet,
    nodes: Vec<f64>,
    derivative_values: Vec<f64>,
    integration_constant: f64,
}

impl IntensityPoly {
    pub fn new(
        keypoints: KeypointSet,
        derivative_values: Vec<f64>,
        integration_constant: f64,
    ) -> Result<Self> {
        if derivative_values.len() != keypoints.len() {
            return Err(Error::shape(
                format!("{} derivative values", keypoints.len()),
                derivative_values.len(),
            ));
        }
        let nodes = keypoints.normalized();
        Ok(Self {
            keypoints,
            nodes,
            derivative_values,
            integration_constant,
        })
    }

    /// Constant intensity `value` over the interval.
    pub fn constant(keypoints: KeypointSet, value: f64) -> Self {
        let n = keypoints.len();
        let nodes = keypoints.normalized();
        Self {
            keypoints,
            nodes,
            derivative_values: vec![0.0; n],
            integration_constant: value,
        }
    }

    pub fn keypoints(&self) -> &KeypointSet {
        &self.keypoints
    }

    pub fn interval(&self) -> ExposureInterval {
        self.keypoints.interval()
    }

    pub fn derivative_values(&self) -> &[f64] {
        &self.derivative_values
    }

    pub fn integration_constant(&self) -> f64 {
        self.integration_constant
    }

    pub fn degree(&self) -> usize {
        self.derivative_values.len()
    }

    #[must_use]
    pub fn with_constant(mut self, a: f64) -> Self {
        self.integration_constant = a;
        self
    }

    /// `dL/dt` at `t`, evaluated in Lagrange form.
    pub fn eval_derivative(&self, t: f64) -> f64 {
        let tau = self.interval().normalize(t);
        interpolate(&self.nodes, &self.derivative_values, tau)
    }

    /// Coefficients (in normalized time) of the antiderivative without the
    /// constant: `P(tau) = (T/2) ∫_0^tau q(s) ds`.
    fn primitive_coefficients(&self) -> Vec<f64> {
        let half = 0.5 * self.interval().duration();
        let q = interpolant_monomial(&self.nodes, &self.derivative_values);
        let mut p = Vec::with_capacity(q.len() + 1);
        p.push(0.0);
        p.extend(q.iter().enumerate().map(|(k, c)| half * c / (k + 1) as f64));
        p
    }

    /// `L(t) = P(t) + a`, exact polynomial integration.
    pub fn eval_primitive(&self, t: f64) -> f64 {
        let tau = self.interval().normalize(t);
        horner(&self.primitive_coefficients(), tau) + self.integration_constant
    }

    /// Exact temporal average `(1/T) ∫ L dt` over the exposure.
    pub fn blur_mean(&self) -> f64 {
        unit_mean(&self.primitive_coefficients()) + self.integration_constant
    }

    /// Integration constant that makes the temporal average equal `blurry_value`.
    pub fn solve_constant(&self, blurry_value: f64) -> f64 {
        blurry_value - unit_mean(&self.primitive_coefficients())
    }

    #[must_use]
    pub fn constrained_to_blur(self, blurry_value: f64) -> Self {
        let a = self.solve_constant(blurry_value);
        self.with_constant(a)
    }

    /// Primitive in the monomial basis over normalized time.
    pub fn to_monomial(&self) -> MonomialPoly {
        let mut coefficients = self.primitive_coefficients();
        coefficients[0] = self.integration_constant;
        MonomialPoly {
            coefficients,
            interval: self.interval(),
        }
    }
}

/// Free-function form of [`IntensityPoly::solve_constant`].
pub fn solve_constant(poly: &IntensityPoly, blurry_value: f64) -> f64 {
    poly.solve_constant(blurry_value)
}

/// `L(t) = Σ α_k tau^k` with `tau` the normalized time of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly {
    coefficients: Vec<f64>,
    interval: ExposureInterval,
}

impl MonomialPoly {
    pub fn new(coefficients: Vec<f64>, interval: ExposureInterval) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid_argument(
                "monomial polynomial needs a coefficient",
            ));
        }
        Ok(Self {
            coefficients,
            interval,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn interval(&self) -> ExposureInterval {
        self.interval
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval_normalized(&self, tau: f64) -> f64 {
        horner(&self.coefficients, tau)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_normalized(self.interval.normalize(t))
    }

    /// `dL/dt` at `t` (chain rule through the normalization).
    pub fn eval_derivative(&self, t: f64) -> f64 {
        let tau = self.interval.normalize(t);
        let d: Vec<f64> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        horner(&d, tau) * 2.0 / self.interval.duration()
    }

    /// Exact `(1/T) ∫ L dt`.
    pub fn blur_mean(&self) -> f64 {
        unit_mean(&self.coefficients)
    }
}

/// Evaluates ascending-power coefficients at `x`.
#[inline]
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `(1/2) ∫_{-1}^{1} p`: only even powers survive.
pub(crate) fn unit_mean(coeffs: &[f64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(k, c)| c / (k + 1) as f64)
        .sum()
}
