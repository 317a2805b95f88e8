//! Lagrange bases over normalized time and their conversion to monomial form.

use crate::error::{Error, Result};
use crate::repr::KeypointSet;

/// Value of the `i`-th (0-based) Lagrange basis on `nodes` at `tau`.
///
/// Numerator and denominator are accumulated in the same order, so the
/// basis evaluates to exactly 1 at its own node and exactly 0 at the others.
#[inline]
pub fn basis_value(nodes: &[f64], i: usize, tau: f64) -> f64 {
    let xi = nodes[i];
    let mut num = 1.0;
    let mut den = 1.0;
    for (k, &xk) in nodes.iter().enumerate() {
        if k != i {
            num *= tau - xk;
            den *= xi - xk;
        }
    }
    num / den
}

/// Fails with [`Error::SingularBasis`] if two nodes coincide.
pub fn check_distinct(nodes: &[f64]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::SingularBasis(i, j));
            }
        }
    }
    Ok(())
}

/// `beta_i(t)` for keypoint index `i` (0-based), evaluated in normalized time.
pub fn lagrange_basis(keypoints: &KeypointSet, i: usize, t: f64) -> Result<f64> {
    if i >= keypoints.len() {
        return Err(Error::invalid_argument(format!(
            "basis index {i} out of range for {} keypoints",
            keypoints.len()
        )));
    }
    let nodes = keypoints.normalized();
    check_distinct(&nodes)?;
    Ok(basis_value(&nodes, i, keypoints.interval().normalize(t)))
}

/// Interpolates `Σ values[i] beta_i` at `tau` without forming coefficients.
#[inline]
pub fn interpolate(nodes: &[f64], values: &[f64], tau: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .zip(values)
        .map(|((i, _), &v)| v * basis_value(nodes, i, tau))
        .sum()
}

/// Monomial coefficients (ascending powers) of the interpolant through
/// `(nodes[i], values[i])`, via Newton divided differences.
pub fn interpolant_monomial(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    debug_assert_eq!(n, values.len());
    if n == 0 {
        return Vec::new();
    }
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    // Nested expansion p = dd[n-1]; p = p * (x - nodes[k]) + dd[k].
    let mut coeffs = vec![0.0; n];
    coeffs[0] = dd[n - 1];
    let mut degree = 0;
    for k in (0..n - 1).rev() {
        degree += 1;
        for j in (1..=degree).rev() {
            coeffs[j] = coeffs[j - 1] - nodes[k] * coeffs[j];
        }
        coeffs[0] = dd[k] - nodes[k] * coeffs[0];
    }
    coeffs
}

/// Monomial coefficients of every basis polynomial, one row per basis.
pub fn basis_monomials(nodes: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut unit = vec![0.0; n];
    (0..n)
        .map(|i| {
            unit.iter_mut().for_each(|u| *u = 0.0);
            unit[i] = 1.0;
            interpolant_monomial(nodes, &unit)
        })
        .collect()
}
