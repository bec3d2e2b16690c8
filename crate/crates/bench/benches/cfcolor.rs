use std::hint::black_box;

use cfcolor_core::construct::{construct, construct_2scf};
use cfcolor_core::online::{generate_arrival, online_color, ArrivalKind, StrategyConfig};
use cfcolor_core::oracle::{oracle_max_points, SearchLimits};
use cfcolor_core::{verify_kcf, verify_kscf, Mode};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn verifiers(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    for n in [256usize, 986] {
        let scf = construct(n, 2, Mode::Kscf).unwrap().coloring;
        let cf = construct(n, 2, Mode::Kcf).unwrap().coloring;
        group.bench_with_input(BenchmarkId::new("kscf", n), &scf, |b, col| {
            b.iter(|| verify_kscf(black_box(col), 2))
        });
        group.bench_with_input(BenchmarkId::new("kcf", n), &cf, |b, col| {
            b.iter(|| verify_kcf(black_box(col), 2))
        });
    }
    group.finish();
}

fn constructions(c: &mut Criterion) {
    c.bench_function("construct_2scf/14", |b| b.iter(|| construct_2scf(black_box(14))));
    c.bench_function("construct/kscf-k5-n10000", |b| {
        b.iter(|| construct(black_box(10_000), 5, Mode::Kscf))
    });
}

fn oracle(c: &mut Criterion) {
    let limits = SearchLimits::default().sequential();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("g2(6)", |b| {
        b.iter(|| oracle_max_points(2, black_box(6), Mode::Kscf, &limits))
    });
    group.bench_function("g3(7)", |b| {
        b.iter(|| oracle_max_points(3, black_box(7), Mode::Kscf, &limits))
    });
    group.finish();
}

fn online(c: &mut Criterion) {
    let mut group = c.benchmark_group("online");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let arrival = generate_arrival(n, &ArrivalKind::Random, 1).unwrap();
        let strategy = StrategyConfig::random_fit(1, 1);
        group.bench_with_input(BenchmarkId::new("random-fit", n), &arrival, |b, a| {
            b.iter(|| online_color(a, &strategy))
        });
    }
    group.finish();
}

criterion_group!(benches, verifiers, constructions, oracle, online);
criterion_main!(benches);
