//! Theoretical expected-error series and asymptotic rate extraction.
//!
//! Two independent routes compute the normalized expected squared error of
//! a schedule: the scalar recurrence
//! `r_t = a_t r_{t-1} + (1 - a_t) r_{t-2}` (valid for average-case optimal
//! schedules, where `∫P_t dμ = ∫P_t² dμ`), and direct quadrature of
//! `∫P_t² dμ` (valid for any schedule). The recurrence has characteristic
//! roots `1` and `a_∞ - 1`; a decaying series is its minimal solution, which
//! forward iteration loses at the roundoff floor. The recurrence route
//! therefore switches to backward ratio iteration and carries the series in
//! log space, which keeps deep tails (`r_t` far below `1e-300`) exact enough
//! to fit rates on.

use crate::error::{Error, Result};
use crate::orthopoly::{residual_at, MethodCoefficients};
use crate::spectrum::{Quadrature, SpectralMeasure};

/// Which computation produced an [`ErrorSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesRoute {
    /// The `r_t` recurrence (optimal schedules only).
    Recurrence,
    /// Quadrature of `∫P_t² dμ`.
    Quadrature,
    /// Empirical trial averages.
    MonteCarlo,
}

/// A normalized expected squared-error sequence `r_0..r_T` with `r_0 = 1`,
/// kept in both linear and log form. Linear values may underflow to zero
/// on deep tails; the log values stay finite there and are what rate
/// fitting consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    values: Vec<f64>,
    log_values: Vec<f64>,
    route: SeriesRoute,
    fitted_rate: Option<f64>,
}

impl ErrorSeries {
    /// Wrap raw nonnegative values (logs derived; zeros map to `-inf`).
    pub fn from_values(values: Vec<f64>, route: SeriesRoute) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("error series must be nonempty"));
        }
        for (t, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::numeric(format!("series value {v} at t = {t}")));
            }
        }
        let log_values = values.iter().map(|v| v.ln()).collect();
        Ok(Self {
            values,
            log_values,
            route,
            fitted_rate: None,
        })
    }

    /// Build from natural-log values (linear values derived, underflow
    /// allowed). `-inf` marks a mathematically zero entry.
    pub fn from_log_values(log_values: Vec<f64>, route: SeriesRoute) -> Result<Self> {
        if log_values.is_empty() {
            return Err(Error::domain("error series must be nonempty"));
        }
        if log_values.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::numeric("log series has NaN or +inf entries"));
        }
        let values = log_values.iter().map(|v| v.exp()).collect();
        Ok(Self {
            values,
            log_values,
            route,
            fitted_rate: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// Number of stored entries (`T + 1`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn route(&self) -> SeriesRoute {
        self.route
    }

    pub fn fitted_rate(&self) -> Option<f64> {
        self.fitted_rate
    }

    pub fn set_fitted_rate(&mut self, rate: f64) {
        self.fitted_rate = Some(rate);
    }
}

/// Expected-error series of an optimal schedule from the recurrence
/// `r_t = a_t r_{t-1} + (1 - a_t) r_{t-2}`, `r_1 = 1 + b_1 m_1`, `r_0 = 1`,
/// where `m_1 = ∫λ dμ`.
///
/// Only valid for schedules built by the optimal construction; the
/// recurrence rests on the orthogonality of `P_t` to constants under the
/// `λ dμ` weight. When the forward iteration decays into its roundoff
/// floor (atomless measures), the tail is recovered as the minimal
/// solution by backward ratio iteration.
pub fn rate_recurrence(
    coeffs: &MethodCoefficients,
    first_moment: f64,
    t_max: usize,
) -> Result<ErrorSeries> {
    if t_max > coeffs.iterations() {
        return Err(Error::domain(format!(
            "schedule covers {} iterations, asked for {t_max}",
            coeffs.iterations()
        )));
    }
    if !first_moment.is_finite() {
        return Err(Error::domain(format!("first moment must be finite, got {first_moment}")));
    }
    let r1 = 1.0 + coeffs.b1() * first_moment;
    let mut forward = Vec::with_capacity(t_max + 1);
    forward.push(1.0);
    if t_max >= 1 {
        forward.push(r1);
    }
    for t in 2..=t_max {
        let a = coeffs.a(t);
        let r = a * forward[t - 1] + (1.0 - a) * forward[t - 2];
        if !r.is_finite() {
            return Err(Error::numeric(format!("rate recurrence non-finite at t = {t}")));
        }
        forward.push(r);
    }

    let use_minimal = t_max >= 2
        && r1 > 0.0
        && forward[t_max].abs() < 1e-10
        && (2..=t_max).all(|t| coeffs.a(t) > 1.0);
    if !use_minimal {
        for v in forward.iter_mut() {
            *v = v.max(0.0); // forward roundoff can leave tiny negatives
        }
        return ErrorSeries::from_values(forward, SeriesRoute::Recurrence);
    }

    // Minimal solution: ratios q_t = r_t / r_{t-1} obey
    // q_{t-1} = (1 - a_t)/(q_t - a_t), a contraction toward the decaying
    // branch when iterated downward. Seed far beyond t_max and discard the
    // burn-in.
    let momentum_max = (2..=t_max)
        .map(|t| coeffs.a(t) - 1.0)
        .fold(0.0f64, f64::max)
        .clamp(1e-6, 1.0 - 1e-9);
    let burn_in = ((f64::EPSILON.ln() / momentum_max.ln()).ceil() as usize).clamp(40, 100_000);
    let a_at = |t: usize| -> f64 {
        if t <= t_max {
            coeffs.a(t)
        } else {
            coeffs.a(t_max)
        }
    };
    let mut q = vec![0.0; t_max + 1]; // q[t] = r_t / r_{t-1}, t >= 2
    let mut cur = a_at(t_max + burn_in) - 1.0;
    for t in (2..=t_max + burn_in).rev() {
        if t <= t_max {
            q[t] = cur;
        }
        cur = (1.0 - a_at(t)) / (cur - a_at(t));
        if !cur.is_finite() || cur <= 0.0 {
            return Err(Error::numeric(format!(
                "backward ratio iteration degenerated at t = {t} (q = {cur})"
            )));
        }
    }

    let mut logs = Vec::with_capacity(t_max + 1);
    logs.push(0.0);
    logs.push(r1.ln());
    for t in 2..=t_max {
        logs.push(logs[t - 1] + q[t].ln());
    }
    ErrorSeries::from_log_values(logs, SeriesRoute::Recurrence)
}

/// `∫P_t² dμ` by quadrature, for any schedule.
pub fn expected_error_integral(
    measure: &SpectralMeasure,
    coeffs: &MethodCoefficients,
    t: usize,
    n_nodes: usize,
) -> Result<f64> {
    let quad = Quadrature::for_measure(measure, n_nodes)?;
    quad.integrate(|lambda| {
        let p = residual_at(coeffs, lambda, t);
        p * p
    })
}

/// `∫P_t dμ` by quadrature. Coincides with [`expected_error_integral`]
/// for optimal schedules.
pub fn residual_mean_integral(
    measure: &SpectralMeasure,
    coeffs: &MethodCoefficients,
    t: usize,
    n_nodes: usize,
) -> Result<f64> {
    let quad = Quadrature::for_measure(measure, n_nodes)?;
    quad.integrate(|lambda| residual_at(coeffs, lambda, t))
}

/// Full normalized series `∫P_t² dμ / ∫P_0² dμ` for `t = 0..=t_max`,
/// iterating the residual values over all quadrature nodes at once with
/// periodic rescaling, so deep tails stay meaningful in log space.
pub fn error_series_integral(
    measure: &SpectralMeasure,
    coeffs: &MethodCoefficients,
    t_max: usize,
    n_nodes: usize,
) -> Result<ErrorSeries> {
    if coeffs.iterations() < t_max {
        return Err(Error::domain(format!(
            "schedule covers {} iterations, asked for {t_max}",
            coeffs.iterations()
        )));
    }
    let quad = Quadrature::for_measure(measure, n_nodes)?;
    let mut xs: Vec<f64> = quad.nodes().to_vec();
    xs.extend_from_slice(quad.atom_nodes());
    let mut ws: Vec<f64> = quad.weights().to_vec();
    ws.extend_from_slice(quad.atom_weights());

    let mass: f64 = ws.iter().sum();
    if mass <= 0.0 {
        return Err(Error::numeric("measure has nonpositive discretized mass"));
    }
    let log_mass = mass.ln();

    let mut p_prev: Vec<f64> = vec![1.0; xs.len()];
    let mut p_cur: Vec<f64> = xs.iter().map(|&x| 1.0 + coeffs.b1() * x).collect();
    let mut scale_log = 0.0; // true P = stored P * exp(scale_log)
    let mut logs = Vec::with_capacity(t_max + 1);
    logs.push(0.0);

    let weighted_sq_log = |p: &[f64], ws: &[f64], scale_log: f64| -> f64 {
        let s: f64 = p.iter().zip(ws).map(|(&p, &w)| w * p * p).sum();
        if s == 0.0 {
            f64::NEG_INFINITY
        } else {
            s.ln() + 2.0 * scale_log
        }
    };

    if t_max >= 1 {
        logs.push(weighted_sq_log(&p_cur, &ws, scale_log) - log_mass);
    }
    for t in 2..=t_max {
        let (a, b) = (coeffs.a(t), coeffs.b(t));
        for i in 0..xs.len() {
            let next = (a + b * xs[i]) * p_cur[i] + (1.0 - a) * p_prev[i];
            p_prev[i] = next;
        }
        std::mem::swap(&mut p_prev, &mut p_cur);
        let max_abs = p_cur.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if !max_abs.is_finite() {
            return Err(Error::numeric(format!("residual values non-finite at t = {t}")));
        }
        if max_abs > 0.0 && max_abs < 1e-100 {
            for (p, q) in p_cur.iter_mut().zip(p_prev.iter_mut()) {
                *p /= max_abs;
                *q /= max_abs;
            }
            scale_log += max_abs.ln();
        }
        logs.push(weighted_sq_log(&p_cur, &ws, scale_log) - log_mass);
    }
    ErrorSeries::from_log_values(logs, SeriesRoute::Quadrature)
}

/// Fit `lim sup r_t^{1/t}` as the exponentiated least-squares slope of
/// `ln r_t` against `t` over the trailing `tail_fraction` of the series.
///
/// Needs at least 50 entries and strictly positive tail values; a tail
/// that hits exact zero means the method converged in finitely many steps
/// and no geometric rate exists.
pub fn asymptotic_rate(series: &ErrorSeries, tail_fraction: f64) -> Result<f64> {
    let len = series.len();
    if len < 50 {
        return Err(Error::domain(format!(
            "rate fit needs a series of length >= 50, got {len}"
        )));
    }
    if !tail_fraction.is_finite() || tail_fraction <= 0.0 || tail_fraction > 1.0 {
        return Err(Error::domain(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let start = ((len as f64) * (1.0 - tail_fraction)).floor() as usize;
    let start = start.min(len - 2);
    let logs = &series.log_values()[start..];
    if logs.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(
            "tail of the series hit exact zero: convergence in finitely many steps, \
             no geometric rate",
        ));
    }
    let n = logs.len() as f64;
    let t_mean = start as f64 + (n - 1.0) / 2.0;
    let y_mean: f64 = logs.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &y) in logs.iter().enumerate() {
        let dt = (start + i) as f64 - t_mean;
        num += dt * (y - y_mean);
        den += dt * dt;
    }
    Ok((num / den).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{gradient_descent_coefficients, polyak_coefficients};
    use crate::orthopoly::optimal_coefficients;
    use crate::spectrum::SpectralMeasure;
    use approx::assert_abs_diff_eq;

    #[test]
    fn r0_is_one_and_r1_matches_moments() {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        let coeffs = optimal_coefficients(&mp, 40, 2000).unwrap();
        let series = rate_recurrence(&coeffs, 1.0, 40).unwrap();
        assert_eq!(series.values()[0], 1.0);
        // b1 = -2/3 and first MP moment 1 give r_1 = 1/3
        assert_abs_diff_eq!(series.values()[1], 1.0 / 3.0, epsilon = 1e-8);

        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let cu = optimal_coefficients(&u, 40, 2000).unwrap();
        let su = rate_recurrence(&cu, 1.5, 40).unwrap();
        assert_abs_diff_eq!(su.values()[1], 1.0 / 28.0, epsilon = 1e-10);
    }

    #[test]
    fn mp_half_series_has_closed_form() {
        // for the MP(1, 0.5) optimal schedule the series is exactly
        // r_t = 1/(2^{t+1} - 1); the exact closed-form schedule keeps
        // quadrature error out of this oracle
        let coeffs = crate::methods::mp_closed_form(1.0, 0.5, 20).unwrap();
        let series = rate_recurrence(&coeffs, 1.0, 20).unwrap();
        for t in 0..=20 {
            let exact = 1.0 / (2f64.powi(t as i32 + 1) - 1.0);
            // forward-route cancellation grows like 2^t eps on this schedule
            assert!(
                (series.values()[t] - exact).abs() < 1e-8 * exact,
                "t = {t}: {} vs {exact}",
                series.values()[t]
            );
        }
    }

    #[test]
    fn triple_agreement_small_degrees() {
        for (measure, m1) in [
            (SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap(), 1.0),
            (SpectralMeasure::uniform(1.0, 2.0).unwrap(), 1.5),
        ] {
            let coeffs = optimal_coefficients(&measure, 30, 4000).unwrap();
            let series = rate_recurrence(&coeffs, m1, 30).unwrap();
            for t in 0..=30 {
                let sq = expected_error_integral(&measure, &coeffs, t, 4000).unwrap();
                let lin = residual_mean_integral(&measure, &coeffs, t, 4000).unwrap();
                assert!(
                    (series.values()[t] - sq).abs() <= 1e-8,
                    "t={t}: recurrence {} vs integral {sq}",
                    series.values()[t]
                );
                assert!((sq - lin).abs() <= 1e-8, "t={t}: {sq} vs {lin}");
            }
        }
    }

    #[test]
    fn integral_at_zero_is_total_mass() {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        let coeffs = optimal_coefficients(&mp, 5, 2000).unwrap();
        let v = expected_error_integral(&mp, &coeffs, 0, 2000).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn recurrence_tracks_minimal_solution_in_deep_tail() {
        // uniform(1, 2): r_400 ~ 1e-613, far below f64 underflow; the log
        // series must stay on the decaying branch
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let coeffs = optimal_coefficients(&u, 400, 4000).unwrap();
        let series = rate_recurrence(&coeffs, 1.5, 400).unwrap();
        let logs = series.log_values();
        assert!(logs[400].is_finite());
        assert!(logs[400] < logs[200], "tail must keep decaying");
        // and the series agrees with quadrature where the latter is exact
        let qseries = error_series_integral(&u, &coeffs, 400, 4000).unwrap();
        for t in [5, 20, 50, 100, 200, 399] {
            let diff = (logs[t] - qseries.log_values()[t]).abs();
            assert!(diff < 1e-6 * logs[t].abs().max(1.0), "t = {t}: log diff {diff}");
        }
    }

    #[test]
    fn recurrence_plateaus_on_zero_atom_mass() {
        // MP(1, 4) has mass 3/4 at zero: the expected error floors there
        let mp = SpectralMeasure::marchenko_pastur(1.0, 4.0).unwrap();
        let coeffs = optimal_coefficients(&mp, 200, 2000).unwrap();
        let quad = crate::spectrum::Quadrature::for_measure(&mp, 2000).unwrap();
        let m1 = quad.integrate(|x| x).unwrap();
        let series = rate_recurrence(&coeffs, m1, 200).unwrap();
        assert_abs_diff_eq!(series.values()[200], 0.75, epsilon = 1e-4);
    }

    #[test]
    fn exact_geometric_rate() {
        let values: Vec<f64> = (0..=100).map(|t| 0.5f64.powi(t)).collect();
        let series = ErrorSeries::from_values(values, SeriesRoute::MonteCarlo).unwrap();
        let rate = asymptotic_rate(&series, 0.5).unwrap();
        assert_abs_diff_eq!(rate, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fitted_rates_match_edge_formula() {
        for (measure, m1) in [
            (SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap(), 1.0),
            (SpectralMeasure::uniform(1.0, 2.0).unwrap(), 1.5),
        ] {
            let coeffs = optimal_coefficients(&measure, 400, 4000).unwrap();
            let series = rate_recurrence(&coeffs, m1, 400).unwrap();
            let rate = asymptotic_rate(&series, 0.5).unwrap();
            let (sl, su) = (measure.lower().sqrt(), measure.upper().sqrt());
            let pm = ((su - sl) / (su + sl)).powi(2);
            assert!((rate - pm).abs() < 1e-2, "rate {rate} vs pm {pm}");
        }
    }

    #[test]
    fn characteristic_root_sanity() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let coeffs = optimal_coefficients(&u, 400, 4000).unwrap();
        let series = rate_recurrence(&coeffs, 1.5, 400).unwrap();
        let rate = asymptotic_rate(&series, 0.5).unwrap();
        let tail_start = 360;
        let a_inf: f64 = (tail_start..=400).map(|t| coeffs.a(t)).sum::<f64>()
            / (400 - tail_start + 1) as f64;
        assert!((rate - (a_inf - 1.0)).abs() < 1e-2);
    }

    #[test]
    fn optimality_dominates_pm_and_gd() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let opt = optimal_coefficients(&u, 100, 4000).unwrap();
        let pm = polyak_coefficients(1.0, 2.0, 100).unwrap();
        let gd = gradient_descent_coefficients(2.0 / 3.0, 100).unwrap();
        let s_opt = error_series_integral(&u, &opt, 100, 4000).unwrap();
        let s_pm = error_series_integral(&u, &pm, 100, 4000).unwrap();
        let s_gd = error_series_integral(&u, &gd, 100, 4000).unwrap();
        for t in 0..=100 {
            assert!(
                s_opt.values()[t] <= s_pm.values()[t] + 1e-10,
                "t = {t}: opt {} vs pm {}",
                s_opt.values()[t],
                s_pm.values()[t]
            );
            assert!(s_opt.values()[t] <= s_gd.values()[t] + 1e-10, "t = {t}");
        }
    }

    #[test]
    fn rate_fit_rejects_short_series() {
        let series =
            ErrorSeries::from_values(vec![1.0, 0.5, 0.25], SeriesRoute::MonteCarlo).unwrap();
        assert!(asymptotic_rate(&series, 0.5).is_err());
    }

    #[test]
    fn rate_fit_rejects_zero_tail() {
        let mut values = vec![1.0; 60];
        for (t, v) in values.iter_mut().enumerate() {
            *v = if t < 5 { 0.5f64.powi(t as i32) } else { 0.0 };
        }
        let series = ErrorSeries::from_values(values, SeriesRoute::MonteCarlo).unwrap();
        assert!(asymptotic_rate(&series, 0.5).is_err());
    }
}
