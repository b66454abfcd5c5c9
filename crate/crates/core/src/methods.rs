//! Concrete first-order methods and a schedule-driven runner.
//!
//! All schedules are stored in a single convention:
//! `x_t = x_{t-1} + (a_t - 1)(x_{t-1} - x_{t-2}) + b_t ∇f(x_{t-1})` with
//! `x_1 = x_0 + b_1 ∇f(x_0)`. The closed-form Marchenko-Pastur method is
//! printed elsewhere with the reversed difference `x_{t-2} - x_{t-1}`;
//! the sign flip is applied here at construction so that one runner
//! serves every schedule.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::experiments::QuadraticProblem;
use crate::orthopoly::MethodCoefficients;

/// Polyak momentum (heavy ball) on spectrum edges `[lower, upper]`:
/// constant momentum `((√L-√ℓ)/(√L+√ℓ))²` and step `(2/(√L+√ℓ))²`, first
/// step `2/(L+ℓ)`.
///
/// The degenerate single-eigenvalue case `lower == upper` is meaningful
/// here (zero momentum, step `1/L`) and accepted.
pub fn polyak_coefficients(lower: f64, upper: f64, t_max: usize) -> Result<MethodCoefficients> {
    if !lower.is_finite() || !upper.is_finite() || lower <= 0.0 || upper < lower {
        return Err(Error::domain(format!(
            "polyak needs 0 < lower <= upper, got [{lower}, {upper}]"
        )));
    }
    let (sl, su) = (lower.sqrt(), upper.sqrt());
    let momentum = ((su - sl) / (su + sl)).powi(2);
    let step = (2.0 / (su + sl)).powi(2);
    let b1 = -2.0 / (upper + lower);
    let steps = t_max.saturating_sub(1);
    MethodCoefficients::new(b1, vec![1.0 + momentum; steps], vec![-step; steps])
}

/// The closed-form average-case optimal method for the Marchenko-Pastur
/// measure: `ρ = (1+r)/√r`, `δ_0 = 0`, `δ_t = -1/(ρ + δ_{t-1})`, first
/// step `-1/((1+r)σ²)`, then momentum `-(1 + ρ δ_t)` and step
/// `δ_t/(σ²√r)` at iteration `t`.
pub fn mp_closed_form(sigma: f64, ratio: f64, t_max: usize) -> Result<MethodCoefficients> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    if !ratio.is_finite() || ratio <= 0.0 || ratio == 1.0 {
        return Err(Error::domain(format!(
            "ratio must be positive and != 1, got {ratio}"
        )));
    }
    let rho = (1.0 + ratio) / ratio.sqrt();
    let b1 = -1.0 / ((1.0 + ratio) * sigma * sigma);
    let steps = t_max.saturating_sub(1);
    let mut a = Vec::with_capacity(steps);
    let mut b = Vec::with_capacity(steps);
    // delta_1 belongs to the first (momentum-free) step; the momentum line
    // at iteration t uses delta_t, pinned by cross-validation against the
    // recurrence-derived schedule
    let mut delta = -1.0 / rho;
    for _ in 2..=t_max {
        delta = -1.0 / (rho + delta);
        // momentum -(1 + rho delta_t) in the forward-difference convention
        a.push(-rho * delta);
        b.push(delta / (sigma * sigma * ratio.sqrt()));
    }
    MethodCoefficients::new(b1, a, b)
}

/// Plain gradient descent with a constant step: zero momentum,
/// `b_t = -step` for every `t`.
pub fn gradient_descent_coefficients(step: f64, t_max: usize) -> Result<MethodCoefficients> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let steps = t_max.saturating_sub(1);
    MethodCoefficients::new(-step, vec![1.0; steps], vec![-step; steps])
}

/// Two-step iteration state of the runner.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub x_prev: DVector<f64>,
    pub x_curr: DVector<f64>,
    pub t: usize,
}

/// Run a schedule on a quadratic problem and return the squared errors
/// `‖x_t - x*‖²` for `t = 0..=t_max`.
///
/// Iterate norms above `1e12` times the initial error trigger a numeric
/// error instead of silent overflow.
pub fn run_method(
    problem: &QuadraticProblem,
    coeffs: &MethodCoefficients,
    t_max: usize,
) -> Result<Vec<f64>> {
    if coeffs.iterations() < t_max {
        return Err(Error::domain(format!(
            "schedule covers {} iterations, asked for {t_max}",
            coeffs.iterations()
        )));
    }
    let x_star = problem.solution();
    let e0 = (problem.start() - x_star).norm_squared();
    let blowup = 1e24 * e0.max(f64::MIN_POSITIVE);
    let mut errors = Vec::with_capacity(t_max + 1);
    errors.push(e0);
    if t_max == 0 {
        return Ok(errors);
    }

    let grad0 = problem.gradient(problem.start());
    let x1 = problem.start() + coeffs.b1() * grad0;
    let mut state = IterationState {
        x_prev: problem.start().clone(),
        x_curr: x1,
        t: 1,
    };
    errors.push(record_error(&state.x_curr, x_star, blowup, 1)?);

    while state.t < t_max {
        let t = state.t + 1;
        let grad = problem.gradient(&state.x_curr);
        let momentum = coeffs.a(t) - 1.0;
        let x_next = &state.x_curr
            + momentum * (&state.x_curr - &state.x_prev)
            + coeffs.b(t) * grad;
        state.x_prev = std::mem::replace(&mut state.x_curr, x_next);
        state.t = t;
        errors.push(record_error(&state.x_curr, x_star, blowup, t)?);
    }
    Ok(errors)
}

fn record_error(x: &DVector<f64>, x_star: &DVector<f64>, blowup: f64, t: usize) -> Result<f64> {
    let e = (x - x_star).norm_squared();
    if !e.is_finite() || e > blowup {
        return Err(Error::numeric(format!(
            "iterates diverged at t = {t} (squared error {e}); \
             schedule is invalid for this spectrum"
        )));
    }
    Ok(e)
}
