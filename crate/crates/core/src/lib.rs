//! Average-case optimal first-order methods for random quadratics.
//!
//! Given an expected spectral distribution of the Hessian, this crate
//! constructs the first-order method with optimal average-case complexity
//! by computing the residual polynomial family orthogonal under the
//! `λ dμ` weight, and provides everything needed to study it:
//!
//! - [`spectrum`]: Marchenko-Pastur, uniform and empirical spectral
//!   measures with Gauss-Legendre quadrature;
//! - [`orthopoly`]: the discretized Stieltjes procedure, ratio
//!   asymptotics, and conversion into per-iteration `(a_t, b_t)`
//!   schedules;
//! - [`methods`]: Polyak momentum, the closed-form Marchenko-Pastur
//!   acceleration, gradient descent, and a schedule-driven runner;
//! - [`rates`]: theoretical expected-error series and asymptotic rate
//!   fitting;
//! - [`experiments`]: random quadratic sampling and reproducible Monte
//!   Carlo estimation;
//! - [`validation`]: the self-check suite exposed by the CLI.
//!
//! The headline phenomenon: the optimal schedule's momentum and step
//! converge, as the iteration count grows, to the constants of Polyak
//! momentum, whatever the spectral distribution. The schedules, rates and
//! checks here make that observable numerically.

pub mod error;
pub mod experiments;
pub mod methods;
pub mod orthopoly;
pub mod rates;
pub mod spectrum;
pub mod validation;

pub use error::{Error, Result};
pub use experiments::{
    diagonal_grid_problem, diagonal_problem, monte_carlo, sample_wishart_problem,
    MonteCarloReport, ProblemSampler, QuadraticProblem,
};
pub use methods::{
    gradient_descent_coefficients, mp_closed_form, polyak_coefficients, run_method,
};
pub use orthopoly::{
    eval_residual, optimal_coefficients, q_ratio_sequence, residual_at,
    schedule_from_recurrence, stieltjes_recurrence, stieltjes_recurrence_mapped, AffineMap,
    MethodCoefficients, OrthonormalRecurrence,
};
pub use rates::{
    asymptotic_rate, error_series_integral, expected_error_integral, rate_recurrence,
    residual_mean_integral, ErrorSeries, SeriesRoute,
};
pub use spectrum::{Atom, LambdaWeight, Quadrature, SpectralMeasure};
pub use validation::{run_validation, CheckResult, ValidationConfig};
