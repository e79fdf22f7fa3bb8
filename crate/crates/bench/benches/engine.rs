use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use overmes_core::overpartitions::enumerate;
use overmes_core::qseries::{overpartition_gf, pochhammer};
use overmes_core::verify::{verify_against, Census};
use overmes_core::{Formulas, PochSpec, Sign, StatParams, TheoremId};

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    for order in [30usize, 100, 300] {
        let p = pochhammer(PochSpec::infinite(Sign::Minus, 1, 1), order).unwrap();
        let gf = overpartition_gf(order);
        g.bench_with_input(BenchmarkId::new("mul", order), &order, |b, _| {
            b.iter(|| black_box(&p).mul(black_box(&gf)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("invert", order), &order, |b, _| {
            b.iter(|| black_box(&p).invert().unwrap())
        });
        g.bench_with_input(BenchmarkId::new("overpartition_gf", order), &order, |b, &n| {
            b.iter(|| overpartition_gf(black_box(n)))
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for n in [10u64, 16, 20] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate(black_box(n)).count())
        });
    }
    g.finish();
}

fn verification(c: &mut Criterion) {
    let p = StatParams::new(2, 2, 1).unwrap();
    let order = 20;
    let mut g = c.benchmark_group("verify");
    g.sample_size(20);
    g.bench_function("census N=20", |b| b.iter(|| Census::build(black_box(p), order)));
    g.bench_function("formulas N=20", |b| {
        b.iter(|| Formulas::new(black_box(p), order).unwrap())
    });
    let census = Census::build(p, order);
    let formulas = Formulas::new(p, order).unwrap();
    for id in [TheoremId::GenMes, TheoremId::GenTildeMes, TheoremId::MGen] {
        g.bench_function(format!("{id} N=20"), |b| {
            b.iter(|| verify_against(&census, &formulas, id, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, series, enumeration, verification);
criterion_main!(benches);
