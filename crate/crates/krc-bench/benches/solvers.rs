use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krc_bench::{caterpillar, cw_fixture, tw_fixture};
use krc_core::cw::solve_cw_count;
use krc_core::param::solve_vc;
use krc_core::tw::{approx_tw, solve_tw_exact};
use num_rational::BigRational;

fn exact_tw(c: &mut Criterion) {
    let mut group = c.benchmark_group("tw_exact");
    for n in [10, 20, 40] {
        let f = tw_fixture(n, 1, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| solve_tw_exact(black_box(&f.graph), &f.ntd, 2, 3).expect("solver runs"))
        });
    }
    group.finish();
}

fn approx(c: &mut Criterion) {
    let mut group = c.benchmark_group("tw_approx");
    group.sample_size(10);
    let f = tw_fixture(30, 5, 7);
    for (p, q) in [(1, 1), (1, 2), (1, 10)] {
        let eps = BigRational::new(p.into(), q.into());
        group.bench_with_input(BenchmarkId::new("eps", format!("{p}/{q}")), &eps, |b, eps| {
            b.iter(|| approx_tw(black_box(&f.graph), &f.td, 2, 12, eps).expect("scheme runs"))
        });
    }
    group.finish();
}

fn counting_cw(c: &mut Criterion) {
    let mut group = c.benchmark_group("cw_count");
    for r in [1, 2, 3] {
        let (e, g) = cw_fixture(16, 3, 11);
        group.bench_with_input(BenchmarkId::new("r", r), &r, |b, &r| {
            b.iter(|| solve_cw_count(black_box(&g), &e, 3, r).expect("counting runs"))
        });
    }
    group.finish();
}

fn vertex_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("vc");
    group.sample_size(10);
    for vc in [2, 4, 6] {
        let (g, cover) = caterpillar(vc);
        group.bench_with_input(BenchmarkId::from_parameter(vc), &vc, |b, &vc| {
            b.iter(|| solve_vc(black_box(&g), &cover, vc / 2, 2).expect("solver runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, exact_tw, approx, counting_cw, vertex_cover);
criterion_main!(benches);
