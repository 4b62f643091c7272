use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use entbundle::instances::{k5_instance, k5_parity};
use entbundle::sim::{all_bipartition_spectra, evolve, Integrator};
use entbundle::StateVector;

fn anneal(c: &mut Criterion) {
    let inst = k5_instance();
    let psi0 = StateVector::uniform(10).unwrap();
    let mut group = c.benchmark_group("k5_anneal_1000_steps");
    group.sample_size(20);
    for (name, integrator) in [("yoshida4", Integrator::Yoshida4), ("rk4", Integrator::Rk4)] {
        let spec = inst.anneal_spec(Some(10.0), Some(0.01), None).unwrap().with_integrator(integrator);
        group.bench_function(name, |b| b.iter(|| evolve(black_box(&spec), &psi0, &[10.0]).unwrap()));
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let r = k5_parity().enumerate_states().unwrap();
    let psi = StateVector::uniform_over(&r).unwrap();
    c.bench_function("k5_all_bipartition_spectra", |b| b.iter(|| all_bipartition_spectra(black_box(&psi)).unwrap()));
}

criterion_group!(benches, anneal, spectra);
criterion_main!(benches);
