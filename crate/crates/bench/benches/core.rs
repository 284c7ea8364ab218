use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rbcdn::fault::{geometric_catalog, unit_catalog};
use rbcdn::geom::min_feature_separation;
use rbcdn::{fpp_embed, rbcdn, solve_exact};
use rbcdn_bench::{drawn_maximal, wheel_instance};

fn bench_unit_rbcdn(c: &mut Criterion) {
    let mut group = c.benchmark_group("rbcdn_unit");
    for n in [50, 200, 800] {
        let (es, _) = drawn_maximal(n, 1);
        let cat = unit_catalog(&es.graph);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| rbcdn(black_box(&es.graph), black_box(&cat)).unwrap())
        });
    }
    group.finish();
}

fn bench_geometric_catalog(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometric_catalog");
    group.sample_size(10);
    for n in [8, 16, 32] {
        let (_, layout) = drawn_maximal(n, 2);
        let r = min_feature_separation(&layout).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| geometric_catalog(black_box(&layout), r).unwrap())
        });
    }
    group.finish();
}

fn bench_fpp_embed(c: &mut Criterion) {
    let mut group = c.benchmark_group("fpp_embed");
    for n in [50, 200, 800] {
        let (es, _) = drawn_maximal(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| fpp_embed(black_box(&es.graph), black_box(&es.rotation)).unwrap())
        });
    }
    group.finish();
}

fn bench_solve_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact_wheel");
    group.sample_size(10);
    for n in [5, 7, 9] {
        let inst = wheel_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_exact(black_box(&inst)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_unit_rbcdn,
    bench_geometric_catalog,
    bench_fpp_embed,
    bench_solve_exact
);
criterion_main!(benches);
