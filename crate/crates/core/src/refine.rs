//! Frame refinement: a convex quadratic that makes consecutive frames follow
//! predicted residuals while staying close to the initial reconstruction.
//!
//! ```text
//! f = Σ_{i<d} ‖L_i + R_i − L_{i+1}‖² + λ Σ_i ‖L_i − L̂_i‖²
//! ```
//!
//! Pixels are independent; along time the Hessian is `2 (Δ + λ I)` with `Δ`
//! the path-graph Laplacian, so its spectral norm is below `2 (4 + λ)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repr::{ensure_uniform_shape, EventStream, Frame};

pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

/// `d - 1` additive residuals between consecutive frames.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualStack {
    residuals: Vec<Frame>,
}

impl ResidualStack {
    pub fn new(residuals: Vec<Frame>) -> Result<Self> {
        ensure_uniform_shape(&residuals)?;
        if residuals
            .iter()
            .flat_map(Frame::values)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidInput("residuals must be finite".into()));
        }
        Ok(Self { residuals })
    }

    /// `R_i = L̂_{i+1} − L̂_i`, which makes `L̂` a zero of the flow term.
    pub fn consistent_with(frames: &[Frame]) -> Result<Self> {
        ensure_uniform_shape(frames)?;
        Self::new(
            frames
                .windows(2)
                .map(|w| {
                    let v = w[1]
                        .values()
                        .iter()
                        .zip(w[0].values())
                        .map(|(b, a)| b - a)
                        .collect();
                    Frame::new(w[0].width(), w[0].height(), v).expect("same shape")
                })
                .collect(),
        )
    }

    pub fn frames(&self) -> &[Frame] {
        &self.residuals
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Analytic stand-in for learned residual prediction.
///
/// `R_i = L̂(t_i) (exp(c S_i) − 1)` where `S_i` is the signed event count in
/// `(t_i, t_{i+1}]`: the intensity change implied by the events if every
/// event marks exactly one threshold step in log intensity.
pub fn surrogate_residuals(
    initial: &[Frame],
    events: &EventStream,
    c: f64,
    schedule: &[f64],
) -> Result<ResidualStack> {
    if initial.len() != schedule.len() {
        return Err(Error::shape(
            format!("{} timestamps", initial.len()),
            schedule.len(),
        ));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid_argument(
            "refinement schedule must be strictly increasing",
        ));
    }
    ensure_uniform_shape(initial)?;
    let iv = events.interval();
    for &t in schedule {
        iv.check(t)?;
    }
    if let Some(f) = initial.first() {
        if f.width() != events.width() || f.height() != events.height() {
            return Err(Error::shape(
                format!("{}x{} events", f.width(), f.height()),
                format!("{}x{}", events.width(), events.height()),
            ));
        }
    }
    let px = events.per_pixel();
    let residuals = initial
        .windows(2)
        .zip(schedule.windows(2))
        .map(|(frames, ts)| {
            let values = frames[0]
                .values()
                .iter()
                .enumerate()
                .map(|(idx, &l)| {
                    let s = px.signed_count(idx, ts[0], ts[1]);
                    l * (c * s as f64).exp_m1()
                })
                .collect();
            Frame::new(frames[0].width(), frames[0].height(), values).expect("same shape")
        })
        .collect();
    ResidualStack::new(residuals)
}

/// Which minimizer [`refine`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineSolver {
    #[default]
    Tridiagonal,
    GradientDescent,
}

#[derive(Debug, Clone)]
pub struct RefineProblem {
    pub initial: Vec<Frame>,
    pub residuals: ResidualStack,
    pub lambda: f64,
    pub max_iterations: usize,
    pub step: f64,
}

impl RefineProblem {
    /// Problem with the guaranteed-descent step `0.9 · 2 / (2 (4 + λ))`.
    pub fn new(initial: Vec<Frame>, residuals: ResidualStack, lambda: f64) -> Result<Self> {
        let p = Self {
            initial,
            residuals,
            lambda,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            step: safe_step(lambda),
        };
        p.validate()?;
        Ok(p)
    }

    #[must_use]
    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    #[must_use]
    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn frame_count(&self) -> usize {
        self.initial.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.initial.len();
        if d < 2 {
            return Err(Error::invalid_argument(format!(
                "refinement needs at least 2 frames, got {d}"
            )));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.residuals.len() != d - 1 {
            return Err(Error::shape(
                format!("{} residuals", d - 1),
                self.residuals.len(),
            ));
        }
        ensure_uniform_shape(&self.initial)?;
        if let Some(r) = self.residuals.frames().first() {
            self.initial[0].ensure_same_shape(r)?;
        }
        Ok(())
    }

    fn check_frames(&self, frames: &[Frame]) -> Result<()> {
        if frames.len() != self.initial.len() {
            return Err(Error::shape(
                format!("{} frames", self.initial.len()),
                frames.len(),
            ));
        }
        for f in frames {
            self.initial[0].ensure_same_shape(f)?;
        }
        Ok(())
    }
}

/// Upper bound on the Hessian spectral norm, `2 (4 + λ)`.
pub fn hessian_bound(lambda: f64) -> f64 {
    2.0 * (4.0 + lambda)
}

/// `0.9 · 2 / hessian_bound(λ)`.
pub fn safe_step(lambda: f64) -> f64 {
    0.9 * 2.0 / hessian_bound(lambda)
}

pub fn objective(problem: &RefineProblem, frames: &[Frame]) -> Result<f64> {
    problem.check_frames(frames)?;
    let d = frames.len();
    let mut flow = 0.0;
    for i in 0..d - 1 {
        let r = problem.residuals.frames()[i].values();
        flow += frames[i]
            .values()
            .iter()
            .zip(r)
            .zip(frames[i + 1].values())
            .map(|((a, r), b)| (a + r - b).powi(2))
            .sum::<f64>();
    }
    let mut anchor = 0.0;
    for (l, l0) in frames.iter().zip(&problem.initial) {
        anchor += l
            .values()
            .iter()
            .zip(l0.values())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
    }
    Ok(flow + problem.lambda * anchor)
}

pub fn gradient(problem: &RefineProblem, frames: &[Frame]) -> Result<Vec<Frame>> {
    problem.check_frames(frames)?;
    let d = frames.len();
    let lambda = problem.lambda;
    let mut grads: Vec<Frame> = frames
        .iter()
        .zip(&problem.initial)
        .map(|(l, l0)| {
            let v = l
                .values()
                .iter()
                .zip(l0.values())
                .map(|(a, b)| 2.0 * lambda * (a - b))
                .collect();
            Frame::new(l.width(), l.height(), v).expect("same shape")
        })
        .collect();
    for i in 0..d - 1 {
        let r = problem.residuals.frames()[i].values();
        let (head, tail) = grads.split_at_mut(i + 1);
        let (gi, gnext) = (&mut head[i], &mut tail[0]);
        for (j, ((a, r), b)) in frames[i]
            .values()
            .iter()
            .zip(r)
            .zip(frames[i + 1].values())
            .enumerate()
        {
            let e = 2.0 * (a + r - b);
            gi.values_mut()[j] += e;
            gnext.values_mut()[j] -= e;
        }
    }
    Ok(grads)
}

/// Trace of a gradient-descent run.
#[derive(Debug, Clone)]
pub struct Descent {
    pub frames: Vec<Frame>,
    /// Objective before the first step and after every step.
    pub objectives: Vec<f64>,
}

/// Runs `max_iterations` fixed-step gradient steps starting from `initial`.
pub fn descend(problem: &RefineProblem) -> Result<Descent> {
    problem.validate()?;
    let mut frames = problem.initial.clone();
    let mut objectives = Vec::with_capacity(problem.max_iterations + 1);
    objectives.push(objective(problem, &frames)?);
    for iteration in 1..=problem.max_iterations {
        let g = gradient(problem, &frames)?;
        for (f, gf) in frames.iter_mut().zip(&g) {
            for (v, dv) in f.values_mut().iter_mut().zip(gf.values()) {
                *v -= problem.step * dv;
            }
        }
        let obj = objective(problem, &frames)?;
        if !obj.is_finite() {
            return Err(Error::Divergence {
                iteration,
                objective: obj,
            });
        }
        objectives.push(obj);
    }
    Ok(Descent { frames, objectives })
}

/// Exact minimizer: per pixel, the `d x d` SPD tridiagonal system
/// `(deg_i + λ) L_i − L_{i−1} − L_{i+1} = λ L̂_i − R_i + R_{i−1}`
/// solved by forward elimination and back substitution.
pub fn tridiagonal_solve(problem: &RefineProblem) -> Result<Vec<Frame>> {
    problem.validate()?;
    if problem.lambda <= 0.0 {
        return Err(Error::invalid_argument(
            "the exact solver needs lambda > 0 (lambda = 0 leaves a constant null space)",
        ));
    }
    let d = problem.frame_count();
    let (w, h) = (problem.initial[0].width(), problem.initial[0].height());
    let lambda = problem.lambda;
    let residuals = problem.residuals.frames();

    let columns: Vec<Vec<f64>> = (0..w * h)
        .into_par_iter()
        .map(|j| {
            let diag: Vec<f64> = (0..d)
                .map(|i| {
                    let degree = usize::from(i > 0) + usize::from(i + 1 < d);
                    degree as f64 + lambda
                })
                .collect();
            let rhs: Vec<f64> = (0..d)
                .map(|i| {
                    let mut b = lambda * problem.initial[i].values()[j];
                    if i + 1 < d {
                        b -= residuals[i].values()[j];
                    }
                    if i > 0 {
                        b += residuals[i - 1].values()[j];
                    }
                    b
                })
                .collect();
            solve_symmetric_tridiagonal(&diag, -1.0, &rhs)
        })
        .collect();

    Ok((0..d)
        .map(|i| {
            let v = columns.iter().map(|c| c[i]).collect();
            Frame::new(w, h, v).expect("same shape")
        })
        .collect())
}

/// Thomas algorithm for a symmetric tridiagonal system with constant
/// off-diagonal `off`.
fn solve_symmetric_tridiagonal(diag: &[f64], off: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = off / denom;
    x[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off * c[i - 1];
        c[i] = off / denom;
        x[i] = (rhs[i] - off * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Minimizes the objective with `solver` and clamps to `[0, 1]` as the final
/// per-frame polish.
pub fn refine(problem: &RefineProblem, solver: RefineSolver) -> Result<Vec<Frame>> {
    let frames = match solver {
        RefineSolver::Tridiagonal => tridiagonal_solve(problem)?,
        RefineSolver::GradientDescent => descend(problem)?.frames,
    };
    Ok(frames.iter().map(Frame::clamped).collect())
}
