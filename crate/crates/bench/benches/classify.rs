use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use entbundle::instances::{complete_parity, k5_parity};
use entbundle::subspace::classify_subspace;
use entbundle::MinorEmbedding;

fn k5(c: &mut Criterion) {
    let pe = k5_parity();
    let r = pe.enumerate_states().unwrap();
    c.bench_function("k5_operator_sets", |b| b.iter(|| black_box(&pe).classify().unwrap()));
    c.bench_function("k5_quotient_oracle", |b| b.iter(|| classify_subspace(black_box(&r)).unwrap()));
}

fn k6(c: &mut Criterion) {
    let pe = complete_parity(6);
    let mut group = c.benchmark_group("k6");
    group.sample_size(10);
    group.bench_function("operator_sets", |b| b.iter(|| black_box(&pe).classify().unwrap()));
    group.finish();
}

fn minor(c: &mut Criterion) {
    let me = MinorEmbedding::from_chain_sizes(&[4, 3, 3, 2]).unwrap();
    c.bench_function("minor_4332_operator_sets", |b| b.iter(|| black_box(&me).classify().unwrap()));
}

criterion_group!(benches, k5, k6, minor);
criterion_main!(benches);
