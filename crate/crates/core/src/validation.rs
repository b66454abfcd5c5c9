//! The built-in verification suite behind the `validate` CLI command.
//!
//! Each check pins one claim of the construction — closed-form recurrence
//! oracles, parameter limits, ratio asymptotics, rate identities,
//! pointwise optimality, Monte Carlo against theory — at a fixed
//! tolerance. Checks report pass/fail with a one-line detail; the CLI
//! turns any failure into a nonzero exit code.

use crate::error::Result;
use crate::experiments::{monte_carlo, ProblemSampler};
use crate::methods::{gradient_descent_coefficients, mp_closed_form, polyak_coefficients};
use crate::orthopoly::{
    optimal_coefficients, q_ratio_sequence, residual_at, schedule_from_recurrence,
    stieltjes_recurrence, stieltjes_recurrence_mapped, AffineMap,
};
use crate::rates::{
    asymptotic_rate, error_series_integral, expected_error_integral, rate_recurrence,
    residual_mean_integral,
};
use crate::spectrum::{gauss_legendre, Quadrature, SpectralMeasure};

/// Outcome of a single validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self { name, passed: true, detail }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self { name, passed: false, detail }
    }

    fn from_error(name: &'static str, err: impl std::fmt::Display) -> Self {
        Self::fail(name, format!("errored: {err}"))
    }
}

/// Tunables for the validation run.
#[derive(Debug, Clone)]
pub struct ValidationConfig {
    /// Base quadrature size; individual checks raise it where their degree
    /// demands more nodes.
    pub nodes: usize,
    /// Restrict to the fast (t <= 50) subset, skipping the deep-degree,
    /// Monte Carlo and conditioning-sweep checks.
    pub fast: bool,
    /// Shift applied to every Stieltjes alpha before the schedule
    /// consistency check; nonzero values must make that check fail.
    pub alpha_perturbation: f64,
    /// Seed for the Monte Carlo check.
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            nodes: 4000,
            fast: false,
            alpha_perturbation: 0.0,
            seed: 0,
        }
    }
}

fn default_measures() -> [(&'static str, SpectralMeasure, f64); 2] {
    [
        (
            "mp(1, 0.5)",
            SpectralMeasure::marchenko_pastur(1.0, 0.5).expect("valid parameters"),
            1.0,
        ),
        (
            "uniform(1, 2)",
            SpectralMeasure::uniform(1.0, 2.0).expect("valid parameters"),
            1.5,
        ),
    ]
}

fn pm_limits(measure: &SpectralMeasure) -> (f64, f64) {
    let (sl, su) = (measure.lower().sqrt(), measure.upper().sqrt());
    let momentum = ((su - sl) / (su + sl)).powi(2);
    let step = -(2.0 / (su + sl)).powi(2);
    (momentum, step)
}

/// Run the suite and collect per-check outcomes.
pub fn run_validation(cfg: &ValidationConfig) -> Vec<CheckResult> {
    let mut results = vec![
        check_legendre_oracle(cfg),
        check_chebyshev_mp_oracle(cfg),
        check_closed_form_equivalence(cfg),
        check_parameter_limits(cfg),
        check_rakhmanov_ratio(cfg),
        check_residual_orthogonality(cfg),
        check_rate_triple_agreement(cfg),
        check_schedule_consistency(cfg),
        check_b1_routes(cfg),
        check_pointwise_optimality(cfg),
    ];
    if !cfg.fast {
        results.push(check_asymptotic_rate(cfg));
        results.push(check_figure2_monotonicity(cfg));
        results.push(check_monte_carlo_vs_theory(cfg));
    }
    results
}

/// Stieltjes on the plain uniform weight over [-1, 1] must reproduce the
/// closed-form Legendre coefficients alpha_t = t/sqrt(4t^2-1), beta_t = 0.
fn check_legendre_oracle(_cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "legendre-oracle";
    let t_max = 50;
    let (xi, mut w) = gauss_legendre(1000);
    for v in w.iter_mut() {
        *v *= 0.5;
    }
    let rec = match stieltjes_recurrence_mapped(&xi, &w, t_max) {
        Ok(r) => r,
        Err(e) => return CheckResult::from_error(NAME, e),
    };
    let mut worst = 0.0f64;
    for t in 1..=t_max {
        let tf = t as f64;
        let exact = tf / (4.0 * tf * tf - 1.0).sqrt();
        worst = worst.max((rec.alpha(t) - exact).abs());
        worst = worst.max(rec.beta(t - 1).abs());
    }
    let detail = format!("max coefficient error {worst:.3e} over t <= {t_max} (tol 1e-10)");
    if worst < 1e-10 {
        CheckResult::pass(NAME, detail)
    } else {
        CheckResult::fail(NAME, detail)
    }
}

/// The lambda-weighted MP(1, 0.5) measure maps to the semicircle weight,
/// so its recurrence must be Chebyshev-U: alpha = 1/2, beta = 0.
fn check_chebyshev_mp_oracle(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "chebyshev-mp-oracle";
    let t_max = if cfg.fast { 50 } else { 100 };
    let nodes = cfg.nodes.max(10 * t_max);
    let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).expect("valid parameters");
    let run = || -> Result<f64> {
        let map = AffineMap::new(mp.lower(), mp.upper())?;
        let quad = Quadrature::for_weight(&mp.lambda_weighted(), nodes)?;
        let rec = stieltjes_recurrence(&quad, &map, t_max)?;
        let mut worst = 0.0f64;
        for t in 2..=t_max {
            worst = worst.max((rec.alpha(t) - 0.5).abs());
            worst = worst.max(rec.beta(t - 1).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => {
            let detail =
                format!("max deviation from (1/2, 0) is {worst:.3e} for 2 <= t <= {t_max} (tol 1e-6)");
            if worst < 1e-6 {
                CheckResult::pass(NAME, detail)
            } else {
                CheckResult::fail(NAME, detail)
            }
        }
        Err(e) => CheckResult::from_error(NAME, e),
    }
}

/// The closed-form MP method and the Stieltjes pipeline must produce the
/// same schedule.
fn check_closed_form_equivalence(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "mp-closed-form-equivalence";
    let t_max = 50;
    let run = || -> Result<f64> {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5)?;
        let pipeline = optimal_coefficients(&mp, t_max, cfg.nodes.max(10 * t_max))?;
        let closed = mp_closed_form(1.0, 0.5, t_max)?;
        let mut worst = (pipeline.b1() - closed.b1()).abs();
        for t in 2..=t_max {
            worst = worst.max((pipeline.a(t) - closed.a(t)).abs());
            worst = worst.max((pipeline.b(t) - closed.b(t)).abs());
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => {
            let detail = format!("max schedule gap {worst:.3e} for t <= {t_max} (tol 1e-6)");
            if worst < 1e-6 {
                CheckResult::pass(NAME, detail)
            } else {
                CheckResult::fail(NAME, detail)
            }
        }
        Err(e) => CheckResult::from_error(NAME, e),
    }
}

/// Momentum and step of the optimal schedules must approach the
/// edge-formula constants: gap < 1e-2 at t = 300 and < 1e-3 at t = 1000.
fn check_parameter_limits(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "parameter-limits";
    let stages: &[(usize, f64)] = if cfg.fast {
        &[(50, 0.1)]
    } else {
        &[(300, 1e-2), (1000, 1e-3)]
    };
    let mut detail = String::new();
    for &(t_max, tol) in stages {
        for (label, measure, _) in default_measures() {
            let nodes = cfg.nodes.max(10 * t_max);
            let coeffs = match optimal_coefficients(&measure, t_max, nodes) {
                Ok(c) => c,
                Err(e) => return CheckResult::from_error(NAME, e),
            };
            let (pm_mom, pm_step) = pm_limits(&measure);
            let gap_mom = (coeffs.momentum(t_max) - pm_mom).abs();
            let gap_step = (coeffs.b(t_max) - pm_step).abs();
            detail.push_str(&format!(
                "{label} t={t_max}: |Δmomentum|={gap_mom:.2e} |Δstep|={gap_step:.2e} (tol {tol:.0e}); "
            ));
            if gap_mom >= tol || gap_step >= tol {
                return CheckResult::fail(NAME, detail);
            }
        }
    }
    CheckResult::pass(NAME, detail)
}

/// The polynomial ratio at m0 must approach m0 + sqrt(m0^2 - 1).
fn check_rakhmanov_ratio(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "rakhmanov-ratio";
    let t_max = if cfg.fast { 50 } else { 300 };
    let tol = if cfg.fast { 0.1 } else { 1e-3 };
    let mut detail = String::new();
    for (label, measure, _) in default_measures() {
        let nodes = cfg.nodes.max(10 * t_max);
        let run = || -> Result<f64> {
            let map = AffineMap::new(measure.lower(), measure.upper())?;
            let quad = Quadrature::for_weight(&measure.lambda_weighted(), nodes)?;
            let rec = stieltjes_recurrence(&quad, &map, t_max)?;
            let ratios = q_ratio_sequence(&rec, map.m0(), t_max)?;
            let m0 = map.m0();
            let limit = m0 + (m0 * m0 - 1.0).sqrt();
            Ok((ratios[t_max - 1] - limit).abs())
        };
        match run() {
            Ok(gap) => {
                detail.push_str(&format!("{label}: |ρ_{t_max} - limit| = {gap:.2e}; "));
                if gap >= tol {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{detail}(tol {tol:.0e})"))
}

/// Residual normalization P_t(0) = 1 and orthogonality of the P_t under
/// the lambda weight.
fn check_residual_orthogonality(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "residual-orthogonality";
    let t_norm = if cfg.fast { 50 } else { 300 };
    let t_orth = if cfg.fast { 15 } else { 30 };
    let mut detail = String::new();
    for (label, measure, _) in default_measures() {
        let nodes = cfg.nodes.max(10 * t_norm);
        let run = || -> Result<(f64, f64)> {
            let coeffs = optimal_coefficients(&measure, t_norm, nodes)?;
            let mut worst_norm = 0.0f64;
            for p in crate::orthopoly::eval_residual(&coeffs, 0.0, t_norm) {
                worst_norm = worst_norm.max((p - 1.0).abs());
            }
            let quad = Quadrature::for_weight(&measure.lambda_weighted(), nodes)?;
            let mut norms = vec![0.0; t_orth + 1];
            for (i, n) in norms.iter_mut().enumerate() {
                *n = quad.integrate(|x| {
                    let p = residual_at(&coeffs, x, i);
                    p * p
                })?;
            }
            let mut worst_orth = 0.0f64;
            for i in 0..=t_orth {
                for j in 0..i {
                    let inner =
                        quad.integrate(|x| residual_at(&coeffs, x, i) * residual_at(&coeffs, x, j))?;
                    worst_orth = worst_orth.max(inner.abs() / (norms[i] * norms[j]).sqrt());
                }
            }
            Ok((worst_norm, worst_orth))
        };
        match run() {
            Ok((wn, wo)) => {
                detail.push_str(&format!(
                    "{label}: max|P_t(0)-1|={wn:.1e} (tol 1e-12), max normalized inner={wo:.2e} (tol 1e-8); "
                ));
                if wn > 1e-12 || wo > 1e-8 {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, detail)
}

/// Recurrence, squared-residual quadrature and linear-residual quadrature
/// must agree, and r_1 must hit the moment-derived values.
fn check_rate_triple_agreement(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "rate-triple-agreement";
    let t_max = 30;
    let mut detail = String::new();
    for (label, measure, m1) in default_measures() {
        let nodes = cfg.nodes.max(10 * t_max);
        let run = || -> Result<(f64, f64)> {
            let coeffs = optimal_coefficients(&measure, t_max, nodes)?;
            let series = rate_recurrence(&coeffs, m1, t_max)?;
            let mut worst = 0.0f64;
            for t in 0..=t_max {
                let sq = expected_error_integral(&measure, &coeffs, t, nodes)?;
                let lin = residual_mean_integral(&measure, &coeffs, t, nodes)?;
                worst = worst.max((series.values()[t] - sq).abs());
                worst = worst.max((sq - lin).abs());
            }
            Ok((worst, series.values()[1]))
        };
        match run() {
            Ok((worst, r1)) => {
                let r1_expected = if label.starts_with("mp") { 1.0 / 3.0 } else { 1.0 / 28.0 };
                let r1_gap = (r1 - r1_expected).abs();
                detail.push_str(&format!(
                    "{label}: max route gap {worst:.2e}, |r_1 - {r1_expected:.5}| = {r1_gap:.2e}; "
                ));
                if worst > 1e-8 || r1_gap > 1e-8 {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{detail}(tol 1e-8)"))
}

/// Rebuilding the schedule from the stored recurrence must reproduce the
/// pipeline output bit for bit; the alpha perturbation hook must break it.
fn check_schedule_consistency(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "schedule-recurrence-consistency";
    let t_max = 50;
    let nodes = cfg.nodes.max(10 * t_max);
    let run = || -> Result<(bool, f64)> {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5)?;
        let map = AffineMap::new(mp.lower(), mp.upper())?;
        let wquad = Quadrature::for_weight(&mp.lambda_weighted(), nodes)?;
        let rec = stieltjes_recurrence(&wquad, &map, t_max)?;
        let mquad = Quadrature::for_measure(&mp, nodes)?;
        let b1 = -mquad.integrate(|x| x)? / mquad.integrate(|x| x * x)?;
        let reference = optimal_coefficients(&mp, t_max, nodes)?;
        let rec = rec.with_alpha_perturbation(cfg.alpha_perturbation)?;
        let rebuilt = schedule_from_recurrence(&rec, b1, t_max)?;
        let mut bitwise = reference.b1().to_bits() == rebuilt.b1().to_bits();
        let mut worst = (reference.b1() - rebuilt.b1()).abs();
        for t in 2..=t_max {
            bitwise &= reference.a(t).to_bits() == rebuilt.a(t).to_bits();
            bitwise &= reference.b(t).to_bits() == rebuilt.b(t).to_bits();
            worst = worst.max((reference.a(t) - rebuilt.a(t)).abs());
            worst = worst.max((reference.b(t) - rebuilt.b(t)).abs());
        }
        Ok((bitwise, worst))
    };
    match run() {
        Ok((bitwise, worst)) => {
            let detail = format!(
                "alpha perturbation {:.1e}: bitwise match = {bitwise}, max gap {worst:.2e}",
                cfg.alpha_perturbation
            );
            if bitwise {
                CheckResult::pass(NAME, detail)
            } else {
                CheckResult::fail(NAME, detail)
            }
        }
        Err(e) => CheckResult::from_error(NAME, e),
    }
}

/// The moment identity b1 = -m1/m2 must agree with the degree-one
/// Stieltjes route -2/((L-l) alpha_1 rho_1).
fn check_b1_routes(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "b1-moment-route";
    let mut detail = String::new();
    for (label, measure, _) in default_measures() {
        let run = || -> Result<f64> {
            let map = AffineMap::new(measure.lower(), measure.upper())?;
            let wquad = Quadrature::for_weight(&measure.lambda_weighted(), cfg.nodes)?;
            let rec = stieltjes_recurrence(&wquad, &map, 4)?;
            let rho1 = q_ratio_sequence(&rec, map.m0(), 1)?[0];
            let b1_rec = -2.0 / ((measure.upper() - measure.lower()) * rec.alpha(1) * rho1);
            let coeffs = optimal_coefficients(&measure, 4, cfg.nodes)?;
            Ok((coeffs.b1() - b1_rec).abs())
        };
        match run() {
            Ok(gap) => {
                detail.push_str(&format!("{label}: |Δb1| = {gap:.2e}; "));
                if gap > 1e-8 {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{detail}(tol 1e-8)"))
}

/// The optimal schedule's expected error can beat neither bound: it must
/// be pointwise below PM and gradient descent at every degree.
fn check_pointwise_optimality(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "pointwise-optimality";
    let t_max = if cfg.fast { 50 } else { 100 };
    let mut detail = String::new();
    for (label, measure, _) in default_measures() {
        let nodes = cfg.nodes.max(10 * t_max);
        let run = || -> Result<f64> {
            let opt = optimal_coefficients(&measure, t_max, nodes)?;
            let pm = polyak_coefficients(measure.lower(), measure.upper(), t_max)?;
            let gd = gradient_descent_coefficients(
                2.0 / (measure.lower() + measure.upper()),
                t_max,
            )?;
            let s_opt = error_series_integral(&measure, &opt, t_max, nodes)?;
            let s_pm = error_series_integral(&measure, &pm, t_max, nodes)?;
            let s_gd = error_series_integral(&measure, &gd, t_max, nodes)?;
            let mut worst = f64::NEG_INFINITY;
            for t in 0..=t_max {
                worst = worst.max(s_opt.values()[t] - s_pm.values()[t]);
                worst = worst.max(s_opt.values()[t] - s_gd.values()[t]);
            }
            Ok(worst)
        };
        match run() {
            Ok(worst) => {
                detail.push_str(&format!("{label}: max excess {worst:.2e}; "));
                if worst > 1e-10 {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{detail}(slack 1e-10)"))
}

/// The fitted asymptotic rate of the optimal series must land on the
/// edge-formula rate.
fn check_asymptotic_rate(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "asymptotic-rate";
    let t_max = 400;
    let mut detail = String::new();
    for (label, measure, m1) in default_measures() {
        let nodes = cfg.nodes.max(10 * t_max);
        let run = || -> Result<(f64, f64)> {
            let coeffs = optimal_coefficients(&measure, t_max, nodes)?;
            let series = rate_recurrence(&coeffs, m1, t_max)?;
            let rate = asymptotic_rate(&series, 0.5)?;
            let (pm_mom, _) = pm_limits(&measure);
            Ok((rate, pm_mom))
        };
        match run() {
            Ok((rate, pm)) => {
                detail.push_str(&format!("{label}: fitted {rate:.6} vs limit {pm:.6}; "));
                if (rate - pm).abs() >= 1e-2 {
                    return CheckResult::fail(NAME, detail);
                }
            }
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    CheckResult::pass(NAME, format!("{detail}(tol 1e-2)"))
}

/// Iterations needed for the momentum gap to fall below 1e-3 must grow
/// strictly with the condition number of the uniform family.
fn check_figure2_monotonicity(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "conditioning-monotonicity";
    let t_max = 1000;
    let nodes = cfg.nodes.max(10 * t_max);
    let mut crossings = Vec::new();
    for kappa in [4.0, 100.0, 10000.0] {
        let run = || -> Result<usize> {
            let measure = SpectralMeasure::uniform(1.0, kappa)?;
            let coeffs = optimal_coefficients(&measure, t_max, nodes)?;
            let (pm_mom, _) = pm_limits(&measure);
            for t in 2..=t_max {
                if (coeffs.momentum(t) - pm_mom).abs() < 1e-3 {
                    return Ok(t);
                }
            }
            Ok(t_max + 1)
        };
        match run() {
            Ok(c) => crossings.push((kappa, c)),
            Err(e) => return CheckResult::from_error(NAME, e),
        }
    }
    let detail = format!(
        "iterations to momentum gap < 1e-3: {}",
        crossings
            .iter()
            .map(|(k, c)| format!("kappa={k}: {c}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let strictly_increasing = crossings.windows(2).all(|w| w[0].1 < w[1].1);
    if strictly_increasing {
        CheckResult::pass(NAME, detail)
    } else {
        CheckResult::fail(NAME, detail)
    }
}

/// Empirical Monte Carlo error curves on sampled Wishart problems must
/// track the theoretical expected error within finite-dimension slack.
fn check_monte_carlo_vs_theory(cfg: &ValidationConfig) -> CheckResult {
    const NAME: &str = "monte-carlo-vs-theory";
    let (d, n, trials, t_max) = (200, 400, 20, 10);
    let run = || -> Result<f64> {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5)?;
        let coeffs = optimal_coefficients(&mp, t_max, cfg.nodes)?;
        let sampler = ProblemSampler::Wishart { d, n, sigma: 1.0, radius: 1.0 };
        let report = monte_carlo(&sampler, &coeffs, t_max, trials, cfg.seed)?;
        let mut worst = 0.0f64;
        for t in 1..=t_max {
            let theory = expected_error_integral(&mp, &coeffs, t, cfg.nodes)?;
            worst = worst.max((report.per_t_mean[t] - theory).abs() / theory);
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => {
            let detail = format!(
                "d={d} n={n} trials={trials}: max relative gap {worst:.3} for t <= {t_max} (tol 0.15)"
            );
            if worst < 0.15 {
                CheckResult::pass(NAME, detail)
            } else {
                CheckResult::fail(NAME, detail)
            }
        }
        Err(e) => CheckResult::from_error(NAME, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let cfg = ValidationConfig { fast: true, ..Default::default() };
        let results = run_validation(&cfg);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn alpha_perturbation_breaks_consistency() {
        let cfg = ValidationConfig {
            fast: true,
            alpha_perturbation: 1e-2,
            ..Default::default()
        };
        let results = run_validation(&cfg);
        let consistency = results
            .iter()
            .find(|r| r.name == "schedule-recurrence-consistency")
            .expect("check present");
        assert!(!consistency.passed, "perturbed recurrence must fail: {}", consistency.detail);
    }
}
