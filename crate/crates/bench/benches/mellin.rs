use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mellin_core::dist::DistributionSpec as D;
use mellin_core::excess::excess_mellin;
use mellin_core::levy::{dist_from_levy, LevySpec};
use mellin_core::limit::{estimate_c, fit_c};
use mellin_core::mellin::{default_lambda_grid, log_mellin_profile, mellin, mellin_with, MellinPath};

fn transforms(c: &mut Criterion) {
    let gamma = D::gamma(2.5);
    let ln = D::lognormal(0.0, 1.0);

    c.bench_function("closed form gamma", |b| {
        b.iter(|| mellin(black_box(&gamma), black_box(1.7), 1e-10))
    });
    c.bench_function("survival quadrature gamma", |b| {
        b.iter(|| mellin_with(black_box(&gamma), black_box(1.7), 1e-10, MellinPath::Survival))
    });
    c.bench_function("density quadrature lognormal", |b| {
        b.iter(|| mellin_with(black_box(&ln), black_box(1.7), 1e-10, MellinPath::Density))
    });
    c.bench_function("excess gamma ratio", |b| {
        b.iter(|| excess_mellin(black_box(&ln), black_box(2.0), black_box(1.7)))
    });
    c.bench_function("profile on default grid", |b| {
        let grid = default_lambda_grid();
        b.iter(|| log_mellin_profile(black_box(&ln), &grid))
    });
}

fn nested(c: &mut Criterion) {
    let spec = D::excess(D::size_biased(D::uniform(0.2, 1.7), 1.5), 2.0);
    let mut group = c.benchmark_group("nested");
    group.sample_size(10);
    group.bench_function("excess of size-biased uniform by survival", |b| {
        b.iter(|| mellin_with(black_box(&spec), black_box(1.0), 1e-8, MellinPath::Survival))
    });
    group.finish();
}

fn levy(c: &mut Criterion) {
    let x = dist_from_levy(&LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0)).unwrap();
    let grid: Vec<f64> = (1..=50).map(f64::from).collect();
    c.bench_function("levy c estimate", |b| {
        b.iter(|| estimate_c(black_box(&x), black_box(50.0), 1.0))
    });
    c.bench_function("levy c fit", |b| b.iter(|| fit_c(black_box(&x), &grid, 1.0)));
}

criterion_group!(benches, transforms, nested, levy);
criterion_main!(benches);
