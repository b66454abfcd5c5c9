//! Random quadratic problems and Monte Carlo estimation of expected errors.
//!
//! Trials are fully determined by `(config, master_seed)`: trial `i` uses
//! seed `master_seed + i`, and the reduction over trials runs in trial
//! index order no matter how many workers execute the runs, so reports are
//! bitwise reproducible under any parallelism degree.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::methods::run_method;
use crate::orthopoly::MethodCoefficients;

/// A quadratic objective `f(x) = ½ (x - x*)ᵀ H (x - x*)` together with the
/// starting point of the iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProblem {
    hessian: DMatrix<f64>,
    solution: DVector<f64>,
    start: DVector<f64>,
}

impl QuadraticProblem {
    /// Validates shapes and symmetry (elementwise within `1e-12` relative
    /// to the matrix scale). Positive semidefiniteness is the sampler's
    /// responsibility; Gram constructions guarantee it.
    pub fn new(hessian: DMatrix<f64>, solution: DVector<f64>, start: DVector<f64>) -> Result<Self> {
        let d = hessian.nrows();
        if hessian.ncols() != d {
            return Err(Error::domain("hessian must be square"));
        }
        if solution.len() != d || start.len() != d {
            return Err(Error::domain("vector dimensions must match the hessian"));
        }
        let scale = hessian.amax().max(1.0);
        for i in 0..d {
            for j in (i + 1)..d {
                if (hessian[(i, j)] - hessian[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::domain(format!(
                        "hessian is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            hessian,
            solution,
            start,
        })
    }

    pub fn dim(&self) -> usize {
        self.hessian.nrows()
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hessian
    }

    pub fn solution(&self) -> &DVector<f64> {
        &self.solution
    }

    pub fn start(&self) -> &DVector<f64> {
        &self.start
    }

    /// `∇f(x) = H (x - x*)`.
    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.hessian * (x - &self.solution)
    }

    /// Eigenvalues of the Hessian, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self
            .hessian
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        eigs
    }
}

fn normal_vector(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_iterator(len, (0..len).map(|_| StandardNormal.sample(rng)))
}

/// Start point at exact distance `radius` from the solution, direction
/// uniform on the sphere. `radius = 0` starts at the solution itself.
fn offset_start(rng: &mut ChaCha8Rng, solution: &DVector<f64>, radius: f64) -> DVector<f64> {
    if radius == 0.0 {
        return solution.clone();
    }
    let mut dir = normal_vector(rng, solution.len());
    let mut norm = dir.norm();
    while norm == 0.0 {
        dir = normal_vector(rng, solution.len());
        norm = dir.norm();
    }
    solution + dir * (radius / norm)
}

/// Sample a Wishart-type problem: `A` is `n × d` with iid `N(0, σ²)`
/// entries, `H = AᵀA/n`, Gaussian solution, and start point at exact
/// distance `radius` from it. Same seed, same problem, bit for bit.
pub fn sample_wishart_problem(
    d: usize,
    n: usize,
    sigma: f64,
    radius: f64,
    seed: u64,
) -> Result<QuadraticProblem> {
    if d == 0 || n == 0 {
        return Err(Error::domain("dimensions must be at least 1"));
    }
    if !sigma.is_finite() || !radius.is_finite() || sigma <= 0.0 || radius < 0.0 {
        return Err(Error::domain("sigma must be positive and radius nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n, d, |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        sigma * v
    });
    let mut hessian = a.transpose() * &a / n as f64;
    // gemm can leave sub-eps asymmetry; make the Gram matrix exactly symmetric
    for i in 0..d {
        for j in (i + 1)..d {
            let s = 0.5 * (hessian[(i, j)] + hessian[(j, i)]);
            hessian[(i, j)] = s;
            hessian[(j, i)] = s;
        }
    }
    let solution = normal_vector(&mut rng, d);
    let start = offset_start(&mut rng, &solution, radius);
    QuadraticProblem::new(hessian, solution, start)
}

/// Deterministic diagonal Hessian with the given eigenvalues; solution and
/// start point are sampled as in [`sample_wishart_problem`].
pub fn diagonal_problem(eigenvalues: &[f64], radius: f64, seed: u64) -> Result<QuadraticProblem> {
    if eigenvalues.is_empty() {
        return Err(Error::domain("need at least one eigenvalue"));
    }
    if eigenvalues.iter().any(|&e| !e.is_finite() || e < 0.0) {
        return Err(Error::domain("eigenvalues must be finite and >= 0"));
    }
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::domain("radius must be nonnegative"));
    }
    let d = eigenvalues.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hessian = DMatrix::from_diagonal(&DVector::from_row_slice(eigenvalues));
    let solution = normal_vector(&mut rng, d);
    let start = offset_start(&mut rng, &solution, radius);
    QuadraticProblem::new(hessian, solution, start)
}

/// Diagonal Hessian with `d` eigenvalues on a uniform grid over
/// `[lower, upper]`.
pub fn diagonal_grid_problem(
    lower: f64,
    upper: f64,
    d: usize,
    radius: f64,
    seed: u64,
) -> Result<QuadraticProblem> {
    if !lower.is_finite() || !upper.is_finite() || lower <= 0.0 || upper < lower {
        return Err(Error::domain(format!(
            "grid needs 0 < lower <= upper, got [{lower}, {upper}]"
        )));
    }
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let eigs: Vec<f64> = if d == 1 {
        vec![0.5 * (lower + upper)]
    } else {
        (0..d)
            .map(|i| lower + (upper - lower) * i as f64 / (d - 1) as f64)
            .collect()
    };
    diagonal_problem(&eigs, radius, seed)
}

/// How Monte Carlo trials construct their problems.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSampler {
    /// `H = AᵀA/n` with iid Gaussian entries.
    Wishart { d: usize, n: usize, sigma: f64, radius: f64 },
    /// Diagonal Hessian on a deterministic eigenvalue grid.
    DiagonalGrid { d: usize, lower: f64, upper: f64, radius: f64 },
    /// Diagonal Hessian with explicit eigenvalues.
    DiagonalEigs { eigenvalues: Vec<f64>, radius: f64 },
}

impl ProblemSampler {
    pub fn sample(&self, seed: u64) -> Result<QuadraticProblem> {
        match self {
            ProblemSampler::Wishart { d, n, sigma, radius } => {
                sample_wishart_problem(*d, *n, *sigma, *radius, seed)
            }
            ProblemSampler::DiagonalGrid { d, lower, upper, radius } => {
                diagonal_grid_problem(*lower, *upper, *d, *radius, seed)
            }
            ProblemSampler::DiagonalEigs { eigenvalues, radius } => {
                diagonal_problem(eigenvalues, *radius, seed)
            }
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ProblemSampler::Wishart { d, .. } | ProblemSampler::DiagonalGrid { d, .. } => *d,
            ProblemSampler::DiagonalEigs { eigenvalues, .. } => eigenvalues.len(),
        }
    }

    /// Sample count `n` for Wishart problems; not meaningful otherwise.
    pub fn samples(&self) -> Option<usize> {
        match self {
            ProblemSampler::Wishart { n, .. } => Some(*n),
            _ => None,
        }
    }
}

/// Trial-averaged normalized error curves with their standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    /// Mean of `‖x_t - x*‖² / ‖x_0 - x*‖²` over trials; entry 0 is
    /// exactly 1.
    pub per_t_mean: Vec<f64>,
    /// Standard error of the mean per iteration (zero for a single trial).
    pub per_t_stderr: Vec<f64>,
    pub trials: usize,
    pub dimension: usize,
    /// `n` for Wishart sampling.
    pub samples: Option<usize>,
    pub master_seed: u64,
}

/// Run `trials` independent problems (trial `i` seeded with
/// `master_seed + i`), average the normalized error series in trial index
/// order, and report means with standard errors. Trials execute on the
/// rayon pool; a diverging trial fails the whole report with its index.
pub fn monte_carlo(
    sampler: &ProblemSampler,
    coeffs: &MethodCoefficients,
    t_max: usize,
    trials: usize,
    master_seed: u64,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let runs: Vec<Result<Vec<f64>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = master_seed.wrapping_add(trial as u64);
            let problem = sampler.sample(seed)?;
            let errors = run_method(&problem, coeffs, t_max).map_err(|e| {
                Error::numeric(format!("trial {trial} (seed {seed}): {e}"))
            })?;
            let e0 = errors[0];
            if e0 <= 0.0 {
                return Err(Error::domain(format!(
                    "trial {trial}: initial error is zero; normalized series undefined"
                )));
            }
            Ok(errors.iter().map(|&e| e / e0).collect())
        })
        .collect();

    let mut series = Vec::with_capacity(trials);
    for run in runs {
        series.push(run?);
    }

    let len = t_max + 1;
    let mut per_t_mean = vec![0.0; len];
    let mut per_t_stderr = vec![0.0; len];
    for t in 0..len {
        let mut sum = 0.0;
        for s in &series {
            sum += s[t];
        }
        per_t_mean[t] = sum / trials as f64;
    }
    if trials > 1 {
        for t in 0..len {
            let mean = per_t_mean[t];
            let mut ss = 0.0;
            for s in &series {
                let d = s[t] - mean;
                ss += d * d;
            }
            per_t_stderr[t] = (ss / (trials as f64 - 1.0)).sqrt() / (trials as f64).sqrt();
        }
    }
    Ok(MonteCarloReport {
        per_t_mean,
        per_t_stderr,
        trials,
        dimension: sampler.dimension(),
        samples: sampler.samples(),
        master_seed,
    })
}
