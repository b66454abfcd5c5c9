//! Wall-time benchmarks for the construction pipeline: quadrature rules,
//! the Stieltjes recurrence, schedule assembly, the method runner, and
//! Monte Carlo aggregation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use acopt::{
    monte_carlo, optimal_coefficients, rate_recurrence, run_method, sample_wishart_problem,
    stieltjes_recurrence, AffineMap, ProblemSampler, Quadrature, SpectralMeasure,
};

fn bench_gauss_legendre(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_legendre");
    for n in [256usize, 1024, 4096] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| acopt::spectrum::gauss_legendre(black_box(n)));
        });
    }
    group.finish();
}

fn bench_stieltjes(c: &mut Criterion) {
    let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
    let map = AffineMap::new(mp.lower(), mp.upper()).unwrap();
    let mut group = c.benchmark_group("stieltjes_recurrence");
    for t_max in [50usize, 200] {
        let quad = Quadrature::for_weight(&mp.lambda_weighted(), 10 * t_max).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t_max), &t_max, |b, &t_max| {
            b.iter(|| stieltjes_recurrence(black_box(&quad), &map, t_max).unwrap());
        });
    }
    group.finish();
}

fn bench_optimal_coefficients(c: &mut Criterion) {
    let uniform = SpectralMeasure::uniform(1.0, 2.0).unwrap();
    c.bench_function("optimal_coefficients_t300", |b| {
        b.iter(|| optimal_coefficients(black_box(&uniform), 300, 4000).unwrap());
    });
}

fn bench_rate_recurrence(c: &mut Criterion) {
    let uniform = SpectralMeasure::uniform(1.0, 2.0).unwrap();
    let coeffs = optimal_coefficients(&uniform, 400, 4000).unwrap();
    c.bench_function("rate_recurrence_t400", |b| {
        b.iter(|| rate_recurrence(black_box(&coeffs), 1.5, 400).unwrap());
    });
}

fn bench_run_method(c: &mut Criterion) {
    let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
    let coeffs = optimal_coefficients(&mp, 100, 2000).unwrap();
    let problem = sample_wishart_problem(200, 400, 1.0, 1.0, 0).unwrap();
    c.bench_function("run_method_d200_t100", |b| {
        b.iter(|| run_method(black_box(&problem), &coeffs, 100).unwrap());
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
    let coeffs = optimal_coefficients(&mp, 20, 2000).unwrap();
    let sampler = ProblemSampler::Wishart { d: 60, n: 120, sigma: 1.0, radius: 1.0 };
    c.bench_function("monte_carlo_d60_t20_x8", |b| {
        b.iter(|| monte_carlo(black_box(&sampler), &coeffs, 20, 8, 0).unwrap());
    });
}

criterion_group!(
    benches,
    bench_gauss_legendre,
    bench_stieltjes,
    bench_optimal_coefficients,
    bench_rate_recurrence,
    bench_run_method,
    bench_monte_carlo
);
criterion_main!(benches);
