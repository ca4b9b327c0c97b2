use std::hint::black_box;

use bdlab_bench::lcg_h2;
use bdlab_core::baez_duarte::{build_gram, moebius_residual_with};
use bdlab_core::hardy::{apply_operator, hk_coeffs};
use bdlab_core::{Family, NtTables, Operator, Target};
use criterion::{criterion_group, criterion_main, Criterion};

fn sieve(c: &mut Criterion) {
    c.bench_function("sieve 1e6", |b| b.iter(|| NtTables::sieve(black_box(1_000_000)).unwrap()));
}

fn hk(c: &mut Criterion) {
    c.bench_function("hk_coeffs k=7 N=2^16", |b| b.iter(|| hk_coeffs(black_box(7), 1 << 16).unwrap()));
}

fn operators(c: &mut Criterion) {
    let f = lcg_h2(1 << 16, 1);
    c.bench_function("T_map N=2^16", |b| b.iter(|| apply_operator(Operator::TMap, black_box(&f)).unwrap()));
    c.bench_function("W_3 N=2^16", |b| b.iter(|| apply_operator(Operator::W(3), black_box(&f)).unwrap()));
}

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram");
    g.sample_size(10);
    g.bench_function("Hk K=32 N=2^14", |b| {
        b.iter(|| build_gram(Family::Hk, black_box(32), 1 << 14, Target::One).unwrap())
    });
    g.bench_function("ImsHk K=1000 N=2^20", |b| {
        b.iter(|| build_gram(Family::ImsHk, black_box(1000), 1 << 20, Target::OneMinusZ).unwrap())
    });
    g.finish();
}

fn moebius(c: &mut Criterion) {
    let t = NtTables::sieve(1 << 18).unwrap();
    let mut g = c.benchmark_group("moebius");
    g.sample_size(10);
    g.bench_function("residual n=1000 N=2^18", |b| {
        b.iter(|| moebius_residual_with(&t, black_box(1000), 1 << 18).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sieve, hk, operators, gram, moebius);
criterion_main!(benches);
