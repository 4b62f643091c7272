use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entbundle_bench::random_matrix;

fn rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("gf2_rref");
    for size in [16usize, 64, 256] {
        let m = random_matrix(size, 2 * size, 7);
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| b.iter(|| black_box(m).rref()));
    }
    group.finish();
}

fn nullspace(c: &mut Criterion) {
    let m = random_matrix(48, 96, 11);
    c.bench_function("gf2_nullspace_48x96", |b| b.iter(|| black_box(&m).nullspace_basis()));
}

criterion_group!(benches, rref, nullspace);
criterion_main!(benches);
