//! Orthonormal three-term recurrences and the optimal method schedule.
//!
//! The pipeline: map the support `[ℓ, L]` onto `[-1, 1]`, run the
//! discretized Stieltjes procedure on the `λ dμ` weight to get the
//! orthonormal recurrence coefficients `(α_t, β_t)`, then convert those
//! into the per-iteration `(a_t, b_t)` schedule of the average-case
//! optimal method. Polynomial values at the image of zero grow
//! geometrically, so everything downstream of the recurrence works with
//! consecutive ratios instead of raw values.

use crate::error::{Error, Result};
use crate::spectrum::{Quadrature, SpectralMeasure};

/// Affine map `m` from `[lower, upper]` onto `[-1, 1]` with
/// `m(lower) = 1` and `m(upper) = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    lower: f64,
    upper: f64,
}

impl AffineMap {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || lower <= 0.0 {
            return Err(Error::domain(format!(
                "affine map needs a positive lower edge, got {lower}"
            )));
        }
        if !upper.is_finite() || upper <= lower {
            return Err(Error::domain(format!(
                "affine map needs upper > lower, got [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// `m(λ) = (L+ℓ)/(L-ℓ) - 2λ/(L-ℓ)`.
    pub fn apply(&self, lambda: f64) -> f64 {
        let span = self.upper - self.lower;
        (self.upper + self.lower) / span - 2.0 * lambda / span
    }

    /// `m(0) = (L+ℓ)/(L-ℓ) > 1`, the evaluation point for residual
    /// normalization.
    pub fn m0(&self) -> f64 {
        (self.upper + self.lower) / (self.upper - self.lower)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Coefficients of the orthonormal three-term recurrence
/// `α_t Q_t(ξ) = (ξ - β_{t-1}) Q_{t-1}(ξ) - α_{t-1} Q_{t-2}(ξ)`
/// for the mapped weight, with `Q_0` constant.
///
/// `alphas[i]` holds `α_{i+1}` and `betas[i]` holds `β_i`, so a
/// recurrence of degree `T` stores `α_1..α_T` and `β_0..β_{T-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalRecurrence {
    alphas: Vec<f64>,
    betas: Vec<f64>,
    map_lower: f64,
    map_upper: f64,
}

impl OrthonormalRecurrence {
    pub fn from_parts(
        alphas: Vec<f64>,
        betas: Vec<f64>,
        map_lower: f64,
        map_upper: f64,
    ) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::domain("alpha/beta length mismatch"));
        }
        if alphas.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::numeric("recurrence has a nonpositive or non-finite alpha"));
        }
        Ok(Self {
            alphas,
            betas,
            map_lower,
            map_upper,
        })
    }

    /// Highest polynomial degree the stored coefficients can generate.
    pub fn degree(&self) -> usize {
        self.alphas.len()
    }

    /// `α_t` for `t = 1..=degree()`.
    pub fn alpha(&self, t: usize) -> f64 {
        self.alphas[t - 1]
    }

    /// `β_t` for `t = 0..degree()`.
    pub fn beta(&self, t: usize) -> f64 {
        self.betas[t]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn map_lower(&self) -> f64 {
        self.map_lower
    }

    pub fn map_upper(&self) -> f64 {
        self.map_upper
    }

    /// Image of zero under the affine map this recurrence was built with.
    pub fn m0(&self) -> f64 {
        (self.map_upper + self.map_lower) / (self.map_upper - self.map_lower)
    }

    /// Copy with every `α_t` shifted by `delta`. Hook for sensitivity
    /// checks; a perturbed recurrence must fail the schedule consistency
    /// validation.
    pub fn with_alpha_perturbation(&self, delta: f64) -> Result<Self> {
        let alphas = self.alphas.iter().map(|a| a + delta).collect();
        Self::from_parts(alphas, self.betas.clone(), self.map_lower, self.map_upper)
    }
}

/// Per-iteration coefficients of a first-order method in the convention
/// `x_t = x_{t-1} + (a_t - 1)(x_{t-1} - x_{t-2}) + b_t ∇f(x_{t-1})`,
/// with first step `x_1 = x_0 + b_1 ∇f(x_0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodCoefficients {
    b1: f64,
    /// `a_t` for `t = 2..=T`.
    a: Vec<f64>,
    /// `b_t` for `t = 2..=T`.
    b: Vec<f64>,
}

impl MethodCoefficients {
    pub fn new(b1: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::domain("a/b schedule length mismatch"));
        }
        Ok(Self { b1, a, b })
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    /// Number of iterations the schedule covers (`T`; the first step plus
    /// `a.len()` momentum steps).
    pub fn iterations(&self) -> usize {
        self.a.len() + 1
    }

    /// `a_t` for `t = 2..=iterations()`.
    pub fn a(&self, t: usize) -> f64 {
        self.a[t - 2]
    }

    /// `b_t` for `t = 2..=iterations()`; `b(1)` is `b1`.
    pub fn b(&self, t: usize) -> f64 {
        if t == 1 {
            self.b1
        } else {
            self.b[t - 2]
        }
    }

    /// Momentum `a_t - 1` at iteration `t >= 2`.
    pub fn momentum(&self, t: usize) -> f64 {
        self.a(t) - 1.0
    }
}

/// Discretized Stieltjes procedure: orthonormal recurrence coefficients of
/// the quadrature weight composed with the affine map.
///
/// The continuous part needs at least `10 t_max` nodes; with fewer the
/// computed family loses orthogonality before degree `t_max`. On purely
/// atomic weights the orthonormal family exists only up to one degree
/// below the number of support points, and `t_max` is checked against
/// that instead.
pub fn stieltjes_recurrence(
    quad: &Quadrature,
    map: &AffineMap,
    t_max: usize,
) -> Result<OrthonormalRecurrence> {
    if quad.node_count() > 0 {
        if quad.node_count() < 10 * t_max {
            return Err(Error::domain(format!(
                "stieltjes needs >= {} nodes for degree {t_max}, got {}",
                10 * t_max,
                quad.node_count()
            )));
        }
    } else if t_max >= quad.atom_count() {
        return Err(Error::domain(format!(
            "atomic weight with {} support points generates polynomials only up to degree {}",
            quad.atom_count(),
            quad.atom_count().saturating_sub(1)
        )));
    }
    let mut xi: Vec<f64> = quad.nodes().iter().map(|&x| map.apply(x)).collect();
    xi.extend(quad.atom_nodes().iter().map(|&x| map.apply(x)));
    let mut weights: Vec<f64> = quad.weights().to_vec();
    weights.extend_from_slice(quad.atom_weights());
    let (alphas, betas) = stieltjes_core(&xi, &weights, t_max)?;
    OrthonormalRecurrence::from_parts(alphas, betas, map.lower(), map.upper())
}

/// Stieltjes procedure on nodes already living in `[-1, 1]`, for weights
/// that are not spectral measures (closed-form oracle weights). The stored
/// map interval is `[-1, 1]` itself.
pub fn stieltjes_recurrence_mapped(
    xi: &[f64],
    weights: &[f64],
    t_max: usize,
) -> Result<OrthonormalRecurrence> {
    if xi.len() != weights.len() {
        return Err(Error::domain("node/weight length mismatch"));
    }
    if xi.len() < 10 * t_max {
        return Err(Error::domain(format!(
            "stieltjes needs >= {} nodes for degree {t_max}, got {}",
            10 * t_max,
            xi.len()
        )));
    }
    let (alphas, betas) = stieltjes_core(xi, weights, t_max)?;
    OrthonormalRecurrence::from_parts(alphas, betas, -1.0, 1.0)
}

/// One pass of the plain three-term Stieltjes update: `β_t` as the
/// weighted mean of `ξ q_t²`, `α_{t+1}` as the norm of the next residual,
/// renormalizing at every step.
fn stieltjes_core(xi: &[f64], weights: &[f64], t_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mass: f64 = weights.iter().sum();
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::numeric(format!("weight has nonpositive total mass {mass}")));
    }
    let mut alphas = Vec::with_capacity(t_max);
    let mut betas = Vec::with_capacity(t_max);
    let mut q_prev = vec![0.0; xi.len()];
    let norm0 = mass.sqrt();
    let mut q_cur: Vec<f64> = xi.iter().map(|_| 1.0 / norm0).collect();
    let mut alpha_prev = 0.0;
    for t in 0..t_max {
        let beta: f64 = xi
            .iter()
            .zip(weights)
            .zip(&q_cur)
            .map(|((&x, &w), &q)| w * x * q * q)
            .sum();
        let mut norm_sq = 0.0;
        for i in 0..xi.len() {
            let s = (xi[i] - beta) * q_cur[i] - alpha_prev * q_prev[i];
            q_prev[i] = s; // stash the residual; swapped below
            norm_sq += weights[i] * s * s;
        }
        let alpha = norm_sq.sqrt();
        if !alpha.is_finite() || !beta.is_finite() || alpha <= 0.0 {
            return Err(Error::numeric(format!(
                "stieltjes degenerated at degree {} (alpha = {alpha}); \
                 quadrature too coarse or weight degenerate",
                t + 1
            )));
        }
        for s in q_prev.iter_mut() {
            *s /= alpha;
        }
        std::mem::swap(&mut q_prev, &mut q_cur);
        betas.push(beta);
        alphas.push(alpha);
        alpha_prev = alpha;
    }
    Ok((alphas, betas))
}

/// Ratios `ρ_t = Q_t(ξ)/Q_{t-1}(ξ)` for `t = 1..=t_max` at a point outside
/// the support, via
/// `ρ_t = ((ξ - β_{t-1}) - α_{t-1}/ρ_{t-1}) / α_t` with
/// `ρ_1 = (ξ - β_0)/α_1`.
///
/// Raw `Q_t(ξ)` values grow geometrically for `ξ > 1` and are never
/// materialized.
pub fn q_ratio_sequence(rec: &OrthonormalRecurrence, xi: f64, t_max: usize) -> Result<Vec<f64>> {
    if xi.is_nan() || xi <= 1.0 {
        return Err(Error::domain(format!(
            "ratio evaluation point must lie right of the support, got {xi}"
        )));
    }
    if t_max < 1 || t_max > rec.degree() {
        return Err(Error::domain(format!(
            "ratio degree {t_max} outside recurrence range 1..={}",
            rec.degree()
        )));
    }
    let mut ratios = Vec::with_capacity(t_max);
    let mut prev = (xi - rec.beta(0)) / rec.alpha(1);
    check_ratio(prev, 1)?;
    ratios.push(prev);
    for t in 2..=t_max {
        let rho = ((xi - rec.beta(t - 1)) - rec.alpha(t - 1) / prev) / rec.alpha(t);
        check_ratio(rho, t)?;
        ratios.push(rho);
        prev = rho;
    }
    Ok(ratios)
}

fn check_ratio(rho: f64, t: usize) -> Result<()> {
    if rho == 0.0 || !rho.is_finite() {
        return Err(Error::numeric(format!("polynomial ratio is {rho} at degree {t}")));
    }
    Ok(())
}

/// Assemble the optimal method schedule from an orthonormal recurrence and
/// the first step size, using
/// `1 - a_t = -(α_{t-1}/α_t) Q_{t-2}(m0)/Q_t(m0)` and
/// `b_t = -(2/(α_t (L-ℓ))) Q_{t-1}(m0)/Q_t(m0)`,
/// with every `Q` ratio expressed through consecutive-ratio products.
pub fn schedule_from_recurrence(
    rec: &OrthonormalRecurrence,
    b1: f64,
    t_max: usize,
) -> Result<MethodCoefficients> {
    if t_max < 2 {
        return Err(Error::domain(format!("schedule needs t_max >= 2, got {t_max}")));
    }
    if t_max > rec.degree() {
        return Err(Error::domain(format!(
            "schedule degree {t_max} exceeds recurrence degree {}",
            rec.degree()
        )));
    }
    let span = rec.map_upper() - rec.map_lower();
    let ratios = q_ratio_sequence(rec, rec.m0(), t_max)?;
    let mut a = Vec::with_capacity(t_max - 1);
    let mut b = Vec::with_capacity(t_max - 1);
    for t in 2..=t_max {
        let rho_t = ratios[t - 1];
        let rho_prev = ratios[t - 2];
        let a_t = 1.0 + rec.alpha(t - 1) / (rec.alpha(t) * rho_t * rho_prev);
        let b_t = -2.0 / (rec.alpha(t) * span * rho_t);
        if !a_t.is_finite() || !b_t.is_finite() {
            return Err(Error::numeric(format!("schedule coefficient non-finite at t = {t}")));
        }
        a.push(a_t);
        b.push(b_t);
    }
    MethodCoefficients::new(b1, a, b)
}

/// The average-case optimal schedule for a spectral measure: residual
/// polynomials orthogonal under `λ dμ`, with `b_1 = -m_1/m_2` forced by
/// the orthogonality of `P_1` to constants.
pub fn optimal_coefficients(
    measure: &SpectralMeasure,
    t_max: usize,
    n_nodes: usize,
) -> Result<MethodCoefficients> {
    if t_max < 2 {
        return Err(Error::domain(format!(
            "optimal schedule needs t_max >= 2, got {t_max}"
        )));
    }
    let map = AffineMap::new(measure.lower(), measure.upper())?;
    let weight = measure.lambda_weighted();
    let wquad = Quadrature::for_weight(&weight, n_nodes)?;
    let rec = stieltjes_recurrence(&wquad, &map, t_max)?;
    let mquad = Quadrature::for_measure(measure, n_nodes)?;
    let m1 = mquad.integrate(|x| x)?;
    let m2 = mquad.integrate(|x| x * x)?;
    if m2 <= 0.0 {
        return Err(Error::numeric(format!("second moment must be positive, got {m2}")));
    }
    let coeffs = schedule_from_recurrence(&rec, -m1 / m2, t_max)?;
    for t in 2..=t_max {
        if coeffs.a(t) <= 1.0 || coeffs.b(t) >= 0.0 {
            return Err(Error::numeric(format!(
                "optimal schedule lost its sign structure at t = {t} \
                 (a_t = {}, b_t = {}); quadrature too coarse for this degree",
                coeffs.a(t),
                coeffs.b(t)
            )));
        }
    }
    Ok(coeffs)
}

/// Evaluate the residual polynomials `P_0(λ)..P_t(λ)` by the forward
/// recurrence `P_t = (a_t + b_t λ) P_{t-1} + (1 - a_t) P_{t-2}`, with
/// `P_0 = 1` and `P_1 = 1 + b_1 λ`.
///
/// Panics if `t_max` exceeds the schedule length.
pub fn eval_residual(coeffs: &MethodCoefficients, lambda: f64, t_max: usize) -> Vec<f64> {
    assert!(
        t_max <= coeffs.iterations(),
        "eval_residual degree {} exceeds schedule length {}",
        t_max,
        coeffs.iterations()
    );
    let mut values = Vec::with_capacity(t_max + 1);
    values.push(1.0);
    if t_max == 0 {
        return values;
    }
    values.push(1.0 + coeffs.b1() * lambda);
    for t in 2..=t_max {
        let p = (coeffs.a(t) + coeffs.b(t) * lambda) * values[t - 1]
            + (1.0 - coeffs.a(t)) * values[t - 2];
        values.push(p);
    }
    values
}

/// `P_t(λ)` alone, same recurrence as [`eval_residual`] without the
/// intermediate storage.
pub fn residual_at(coeffs: &MethodCoefficients, lambda: f64, t_max: usize) -> f64 {
    assert!(t_max <= coeffs.iterations());
    if t_max == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + coeffs.b1() * lambda;
    for t in 2..=t_max {
        let next = (coeffs.a(t) + coeffs.b(t) * lambda) * cur + (1.0 - coeffs.a(t)) * prev;
        prev = cur;
        cur = next;
    }
    cur
}
