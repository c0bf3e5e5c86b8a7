use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use finpolylog_bench::{equation, suite};
use finpolylog_core::cocycle::{check_cocycle, coboundary_solve};
use finpolylog_core::eqcat::{verify_strong, verify_weak_with, WeakOptions};
use finpolylog_core::finlog::special_values;
use finpolylog_core::solver::{characterize_with, DEFAULT_MONOMIAL_BUDGET};
use finpolylog_core::Preset;

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("characterize");
    group.sample_size(10);
    for (preset, p) in [
        (Preset::Feit, 31),
        (Preset::L2Pair, 31),
        (Preset::J, 7),
        (Preset::J, 11),
    ] {
        group.bench_with_input(BenchmarkId::new(preset.to_string(), p), &p, |b, &p| {
            b.iter(|| {
                characterize_with(preset, p, DEFAULT_MONOMIAL_BUDGET)
                    .unwrap()
                    .kernel_dim
            })
        });
    }
    group.finish();
}

fn strong(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_strong");
    for p in [5, 13] {
        let sums = suite(p);
        group.bench_with_input(BenchmarkId::new("suite", p), &sums, |b, sums| {
            b.iter(|| sums.iter().all(|s| verify_strong(s, s.weight()).unwrap().holds))
        });
    }
    let j = equation(13, "cathelineau_J");
    group.bench_function("cathelineau_J/13", |b| {
        b.iter(|| verify_strong(black_box(&j), 2).unwrap().holds)
    });
    group.finish();
}

fn weak(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_weak");
    group.sample_size(10);
    let opts = WeakOptions {
        budget: u64::MAX,
        allow_sampling: false,
        seed: 0,
    };
    for (id, p) in [("five_term_v1", 7), ("kontsevich_B", 31), ("derived_goncharov", 7)] {
        let sum = equation(p, id);
        group.bench_with_input(BenchmarkId::new(id, p), &sum, |b, s| {
            b.iter(|| verify_weak_with(s, s.weight(), &opts).unwrap().holds)
        });
    }
    group.finish();
}

fn cocycle(c: &mut Criterion) {
    let mut group = c.benchmark_group("cocycle");
    for p in [11, 31] {
        group.bench_with_input(BenchmarkId::new("check", p), &p, |b, &p| {
            b.iter(|| check_cocycle(p).unwrap().holds())
        });
        group.bench_with_input(BenchmarkId::new("coboundary", p), &p, |b, &p| {
            b.iter(|| coboundary_solve(p).unwrap().is_coboundary)
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    c.bench_function("special_values/101", |b| {
        b.iter(|| special_values(black_box(101)).unwrap().len())
    });
}

criterion_group!(benches, solver, strong, weak, cocycle, tables);
criterion_main!(benches);
