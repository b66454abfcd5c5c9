//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use acopt::{
    asymptotic_rate, error_series_integral, monte_carlo, mp_closed_form, optimal_coefficients,
    polyak_coefficients, rate_recurrence, run_method, ErrorSeries, MethodCoefficients,
    SpectralMeasure, ValidationConfig,
};

use crate::csvout::{fmt_f64, CsvBuilder};
use crate::dist::{DistArgs, DistKind, Distribution};
use crate::svg::{render, Panel, Series};
use crate::{
    effective_nodes, CliError, Figure2Args, FigureArgs, MethodKind, MonteArgs, RatesArgs, RunArgs,
    ValidateArgs,
};

pub struct Context {
    pub nodes: usize,
    pub iters: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Suppress the per-file "wrote ..." notes (internal probes).
    pub quiet: bool,
}

impl Context {
    fn write(&self, name: &str, content: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.out).map_err(|e| {
            CliError::BadArgs(format!("cannot create {}: {e}", self.out.display()))
        })?;
        let path = self.out.join(name);
        fs::write(&path, content)
            .map_err(|e| CliError::BadArgs(format!("cannot write {}: {e}", path.display())))?;
        if !self.quiet {
            println!("wrote {}", path.display());
        }
        Ok(())
    }
}

/// Polyak momentum and (signed) step constants for a measure's edges.
fn pm_constants(measure: &SpectralMeasure) -> (f64, f64) {
    let (sl, su) = (measure.lower().sqrt(), measure.upper().sqrt());
    (((su - sl) / (su + sl)).powi(2), -(2.0 / (su + sl)).powi(2))
}

/// Build the requested method's schedule for a distribution.
fn build_method(
    kind: MethodKind,
    dist: &Distribution,
    iters: usize,
    nodes: usize,
    gd_step: Option<f64>,
) -> Result<MethodCoefficients, CliError> {
    let measure = &dist.measure;
    match kind {
        MethodKind::Optimal => {
            if iters < 2 {
                return Err(CliError::BadArgs("--method optimal needs --iters >= 2".into()));
            }
            Ok(optimal_coefficients(measure, iters, effective_nodes(nodes, iters))?)
        }
        MethodKind::Polyak => Ok(polyak_coefficients(measure.lower(), measure.upper(), iters)?),
        MethodKind::MpClosed => match dist.mp_params() {
            Some((sigma, ratio)) => {
                if iters < 2 {
                    return Err(CliError::BadArgs("--method mp-closed needs --iters >= 2".into()));
                }
                Ok(mp_closed_form(sigma, ratio, iters)?)
            }
            None => Err(CliError::BadArgs(
                "--method mp-closed requires --dist mp".into(),
            )),
        },
        MethodKind::Gd => {
            let step = gd_step.unwrap_or(2.0 / (measure.lower() + measure.upper()));
            Ok(acopt::gradient_descent_coefficients(step, iters)?)
        }
    }
}

/// `coeffs`: per-iteration optimal schedule as CSV.
pub fn coeffs(ctx: &Context, dist_args: &DistArgs) -> Result<(), CliError> {
    let dist = dist_args.resolve()?;
    let t_max = ctx.iters.max(1);
    // the construction needs degree >= 2 even when only the first row is printed
    let degree = t_max.max(2);
    let coeffs = optimal_coefficients(
        &dist.measure,
        degree,
        effective_nodes(ctx.nodes, degree),
    )?;
    let mut csv = CsvBuilder::new();
    csv.comment(&format!("dist={}", dist.label()))
        .comment(&format!("iters={t_max} nodes={}", effective_nodes(ctx.nodes, degree)))
        .header(&["t", "a_t", "b_t", "momentum", "step"]);
    csv.row(&[
        "1".into(),
        String::new(),
        fmt_f64(coeffs.b1()),
        String::new(),
        fmt_f64(-coeffs.b1()),
    ]);
    for t in 2..=t_max {
        csv.row(&[
            t.to_string(),
            fmt_f64(coeffs.a(t)),
            fmt_f64(coeffs.b(t)),
            fmt_f64(coeffs.momentum(t)),
            fmt_f64(-coeffs.b(t)),
        ]);
    }
    ctx.write(&format!("coeffs_{}.csv", dist.slug()), &csv.finish())
}

/// `run`: one method on one sampled problem, squared errors per iteration.
pub fn run(ctx: &Context, args: &RunArgs) -> Result<(), CliError> {
    let dist = args.dist.resolve()?;
    let coeffs = build_method(args.method, &dist, ctx.iters, ctx.nodes, args.step)?;
    let sampler = dist.sampler(args.d, args.n, args.dist.sigma, args.radius);
    let problem = sampler.sample(ctx.seed)?;
    let errors = run_method(&problem, &coeffs, ctx.iters)?;
    let mut csv = CsvBuilder::new();
    csv.comment(&format!(
        "dist={} method={} d={} n={} radius={} seed={}",
        dist.label(),
        args.method.label(),
        problem.dim(),
        args.n,
        args.radius,
        ctx.seed
    ))
    .header(&["t", "sq_error"]);
    for (t, e) in errors.iter().enumerate() {
        csv.row(&[t.to_string(), fmt_f64(*e)]);
    }
    ctx.write(
        &format!("run_{}_{}.csv", dist.slug(), args.method.label()),
        &csv.finish(),
    )
}

/// `rates`: recurrence and quadrature expected-error series plus the
/// fitted asymptotic rate.
pub fn rates(ctx: &Context, args: &RatesArgs) -> Result<(), CliError> {
    let dist = args.dist.resolve()?;
    let t_max = ctx.iters.max(2);
    let nodes = effective_nodes(ctx.nodes, t_max);
    let coeffs = build_method(args.method, &dist, t_max, ctx.nodes, args.step)?;
    let integral = error_series_integral(&dist.measure, &coeffs, t_max, nodes)?;
    // the recurrence route is meaningful only for the optimal construction
    let theory: Option<ErrorSeries> = match args.method {
        MethodKind::Optimal | MethodKind::MpClosed => {
            Some(rate_recurrence(&coeffs, dist.first_moment(nodes)?, t_max)?)
        }
        _ => None,
    };
    let fit_source = theory.as_ref().unwrap_or(&integral);
    let fitted = match asymptotic_rate(fit_source, args.tail_fraction) {
        Ok(r) => fmt_f64(r),
        Err(acopt::Error::Domain(_)) => "undefined".into(),
        Err(e) => return Err(e.into()),
    };
    let (pm_rate, _) = pm_constants(&dist.measure);

    let mut csv = CsvBuilder::new();
    csv.comment(&format!(
        "dist={} method={} iters={t_max} nodes={nodes} tail_fraction={}",
        dist.label(),
        args.method.label(),
        args.tail_fraction
    ))
    .header(&["t", "r_theory", "r_integral", "method"]);
    for t in 0..=t_max {
        let r_theory = theory
            .as_ref()
            .map(|s| fmt_f64(s.values()[t]))
            .unwrap_or_default();
        csv.row(&[
            t.to_string(),
            r_theory,
            fmt_f64(integral.values()[t]),
            args.method.label().into(),
        ]);
    }
    csv.comment(&format!("fitted_rate={fitted} pm_rate={}", fmt_f64(pm_rate)));
    ctx.write(
        &format!("rates_{}_{}.csv", dist.slug(), args.method.label()),
        &csv.finish(),
    )
}

/// `montecarlo`: trial-averaged normalized errors with standard errors.
pub fn montecarlo(ctx: &Context, args: &MonteArgs) -> Result<(), CliError> {
    let dist = args.dist.resolve()?;
    let coeffs = build_method(args.method, &dist, ctx.iters, ctx.nodes, args.step)?;
    let sampler = dist.sampler(args.d, args.n, args.dist.sigma, args.radius);
    let report = monte_carlo(&sampler, &coeffs, ctx.iters, args.trials, ctx.seed)?;
    let mut csv = CsvBuilder::new();
    csv.comment(&format!(
        "dist={} method={} d={} n={} radius={} trials={} iters={} seed={}",
        dist.label(),
        args.method.label(),
        report.dimension,
        args.n,
        args.radius,
        args.trials,
        ctx.iters,
        ctx.seed
    ))
    .header(&["t", "mean", "stderr"]);
    for t in 0..report.per_t_mean.len() {
        csv.row(&[
            t.to_string(),
            fmt_f64(report.per_t_mean[t]),
            fmt_f64(report.per_t_stderr[t]),
        ]);
    }
    ctx.write(
        &format!("montecarlo_{}_{}.csv", dist.slug(), args.method.label()),
        &csv.finish(),
    )
}

/// Default distribution pair for the figures.
fn default_pair() -> Result<Vec<Distribution>, CliError> {
    Ok(vec![Distribution::mp(1.0, 0.5)?, Distribution::uniform(1.0, 2.0)?])
}

/// `figure1`: optimal momentum/step per iteration alongside the Polyak
/// constants, one CSV and one SVG per distribution.
pub fn figure1(ctx: &Context, args: &FigureArgs) -> Result<(), CliError> {
    let dists = if args.dist.is_explicit() {
        vec![args.dist.resolve()?]
    } else {
        default_pair()?
    };
    let t_max = ctx.iters.max(2);
    let nodes = effective_nodes(ctx.nodes, t_max);
    for dist in &dists {
        let coeffs = optimal_coefficients(&dist.measure, t_max, nodes)?;
        let (pm_mom, pm_step) = pm_constants(&dist.measure);
        let pm_b1 = -2.0 / (dist.measure.lower() + dist.measure.upper());

        let mut csv = CsvBuilder::new();
        csv.comment(&format!("dist={} iters={t_max} nodes={nodes}", dist.label()))
            .comment("default parametrization is a representative choice")
            .header(&["dist", "t", "momentum_opt", "step_opt", "momentum_pm", "step_pm"]);
        csv.row(&[
            dist.slug().into(),
            "1".into(),
            String::new(),
            fmt_f64(coeffs.b1()),
            String::new(),
            fmt_f64(pm_b1),
        ]);
        for t in 2..=t_max {
            csv.row(&[
                dist.slug().into(),
                t.to_string(),
                fmt_f64(coeffs.momentum(t)),
                fmt_f64(coeffs.b(t)),
                fmt_f64(pm_mom),
                fmt_f64(pm_step),
            ]);
        }
        ctx.write(&format!("figure1_{}.csv", dist.slug()), &csv.finish())?;

        let momentum_pts: Vec<(f64, f64)> =
            (2..=t_max).map(|t| (t as f64, coeffs.momentum(t))).collect();
        let step_pts: Vec<(f64, f64)> = (2..=t_max).map(|t| (t as f64, coeffs.b(t))).collect();
        let svg = render(
            &[
                Panel {
                    title: format!("momentum, {}", dist.label()),
                    x_label: "iteration t".into(),
                    y_label: "a_t - 1".into(),
                    log_y: false,
                    series: vec![
                        Series::line("optimal", momentum_pts),
                        Series::dashed(
                            "polyak",
                            vec![(2.0, pm_mom), (t_max as f64, pm_mom)],
                        ),
                    ],
                },
                Panel {
                    title: format!("step, {}", dist.label()),
                    x_label: "iteration t".into(),
                    y_label: "b_t".into(),
                    log_y: false,
                    series: vec![
                        Series::line("optimal", step_pts),
                        Series::dashed(
                            "polyak",
                            vec![(2.0, pm_step), (t_max as f64, pm_step)],
                        ),
                    ],
                },
            ],
            440,
            330,
        );
        ctx.write(&format!("figure1_{}.svg", dist.slug()), &svg)?;
    }
    Ok(())
}

/// `figure2`: |parameter - PM constant| per iteration for families of
/// increasing condition number, log scale.
pub fn figure2(ctx: &Context, args: &Figure2Args) -> Result<(), CliError> {
    let t_max = ctx.iters.max(2);
    let nodes = effective_nodes(ctx.nodes, t_max);

    let mut families: Vec<(&str, Vec<(String, Distribution)>)> = Vec::new();
    let mut mp_family = Vec::new();
    for &r in &args.ratios {
        mp_family.push((format!("r={r}"), Distribution::mp(args.sigma, r)?));
    }
    families.push(("mp", mp_family));
    let mut uni_family = Vec::new();
    for &kappa in &args.kappas {
        uni_family.push((format!("kappa={kappa}"), Distribution::uniform(1.0, kappa)?));
    }
    families.push(("uniform", uni_family));

    for (family, members) in families {
        let mut csv = CsvBuilder::new();
        csv.comment(&format!("family={family} iters={t_max} nodes={nodes}"))
            .comment("parametrizations are representative choices")
            .header(&["dist", "param", "t", "abs_momentum_gap", "abs_step_gap"]);
        let mut mom_series = Vec::new();
        let mut step_series = Vec::new();
        for (param, dist) in &members {
            let coeffs = optimal_coefficients(&dist.measure, t_max, nodes)?;
            let (pm_mom, pm_step) = pm_constants(&dist.measure);
            let mut mom_pts = Vec::with_capacity(t_max - 1);
            let mut step_pts = Vec::with_capacity(t_max - 1);
            for t in 2..=t_max {
                let gm = (coeffs.momentum(t) - pm_mom).abs();
                let gs = (coeffs.b(t) - pm_step).abs();
                csv.row(&[
                    dist.slug().into(),
                    param.clone(),
                    t.to_string(),
                    fmt_f64(gm),
                    fmt_f64(gs),
                ]);
                mom_pts.push((t as f64, gm));
                step_pts.push((t as f64, gs));
            }
            mom_series.push(Series::line(param.clone(), mom_pts));
            step_series.push(Series::line(param.clone(), step_pts));
        }
        ctx.write(&format!("figure2_{family}.csv"), &csv.finish())?;
        let svg = render(
            &[
                Panel {
                    title: format!("momentum gap to polyak, {family}"),
                    x_label: "iteration t".into(),
                    y_label: "|momentum - pm|".into(),
                    log_y: true,
                    series: mom_series,
                },
                Panel {
                    title: format!("step gap to polyak, {family}"),
                    x_label: "iteration t".into(),
                    y_label: "|step - pm|".into(),
                    log_y: true,
                    series: step_series,
                },
            ],
            440,
            330,
        );
        ctx.write(&format!("figure2_{family}.svg"), &svg)?;
    }
    Ok(())
}

/// `validate`: run the verification suite plus a CLI-output determinism
/// probe; nonzero exit when anything fails.
pub fn validate(ctx: &Context, args: &ValidateArgs) -> Result<(), CliError> {
    let cfg = ValidationConfig {
        nodes: ctx.nodes,
        fast: args.fast,
        alpha_perturbation: args.perturb_alpha,
        seed: ctx.seed,
    };
    let mut results = acopt::run_validation(&cfg);
    results.push(output_determinism_check(args.fast));

    let mut failures = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", r.name, r.detail);
        if !r.passed {
            failures += 1;
        }
    }
    println!(
        "{} checks, {} passed, {failures} failed",
        results.len(),
        results.len() - failures
    );
    if failures > 0 {
        return Err(CliError::ValidationFailed(failures));
    }
    Ok(())
}

/// Render a reduced figure and Monte Carlo report twice and compare bytes.
fn output_determinism_check(fast: bool) -> acopt::CheckResult {
    let build = || -> Result<String, CliError> {
        let dir = std::env::temp_dir().join(format!(
            "acopt-determinism-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or_default()
        ));
        let iters = if fast { 40 } else { 120 };
        let ctx = Context {
            nodes: 1000,
            iters,
            seed: 7,
            out: dir.clone(),
            quiet: true,
        };
        let fig_args = crate::FigureArgs {
            dist: DistArgs {
                dist: Some(DistKind::Uniform),
                sigma: 1.0,
                ratio: 0.5,
                lmin: 1.0,
                lmax: 2.0,
                eigs: None,
            },
        };
        figure1(&ctx, &fig_args)?;
        let mc_args = crate::MonteArgs {
            dist: fig_args.dist.clone(),
            method: MethodKind::Polyak,
            d: 24,
            n: 48,
            radius: 1.0,
            trials: 6,
            step: None,
        };
        let mc_ctx = Context { iters: 20, ..ctx };
        montecarlo(&mc_ctx, &mc_args)?;
        let mut blob = String::new();
        let mut names: Vec<_> = fs::read_dir(&dir)
            .map_err(|e| CliError::BadArgs(e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        names.sort();
        for p in names {
            blob.push_str(&read_text(&p)?);
        }
        fs::remove_dir_all(&dir).ok();
        Ok(blob)
    };
    match (build(), build()) {
        (Ok(a), Ok(b)) if a == b => acopt::CheckResult {
            name: "cli-output-determinism",
            passed: true,
            detail: format!("{} bytes identical across two renders", a.len()),
        },
        (Ok(_), Ok(_)) => acopt::CheckResult {
            name: "cli-output-determinism",
            passed: false,
            detail: "renders differ between runs".into(),
        },
        (Err(e), _) | (_, Err(e)) => acopt::CheckResult {
            name: "cli-output-determinism",
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))
}
