use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mellin_core::dist::{sample, DistributionSpec as D};
use mellin_core::ks::ks_two_sample;
use mellin_core::levy::{dist_from_levy, LevySpec};

fn draws(c: &mut Criterion) {
    let specs = [
        ("gamma", D::gamma(2.5)),
        ("size-biased lognormal", D::size_biased(D::lognormal(0.0, 1.0), 3.0)),
        ("excess lognormal", D::excess(D::lognormal(0.0, 1.0), 5.0)),
        (
            "levy",
            dist_from_levy(&LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0)).unwrap(),
        ),
    ];
    let mut group = c.benchmark_group("sample 10k");
    for (name, spec) in &specs {
        group.bench_with_input(BenchmarkId::from_parameter(name), spec, |b, spec| {
            b.iter(|| sample(black_box(spec), 10_000, black_box(7)))
        });
    }
    group.finish();
}

fn ks(c: &mut Criterion) {
    let a = sample(&D::exponential(1.0), 100_000, 1).unwrap().values;
    let b = sample(&D::exponential(1.0), 100_000, 2).unwrap().values;
    c.bench_function("ks two-sample 100k", |bench| {
        bench.iter(|| ks_two_sample(black_box(&a), black_box(&b)))
    });
}

criterion_group!(benches, draws, ks);
criterion_main!(benches);
