use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fastmode_bench::{four_fermions, operator};
use fastmode_core::sweep::{self, Control, SweepSpec};
use fastmode_core::{eigen, hamiltonian, EigenConfig, FockBasis, RingSpec, SpeciesSpec};

fn build(c: &mut Criterion) {
    let (ring, species) = four_fermions();
    c.bench_function("basis 2+2 fermions, 8 sites", |b| {
        b.iter(|| FockBasis::enumerate(black_box(&ring), &species).unwrap())
    });
    let basis = FockBasis::enumerate(&ring, &species).unwrap();
    c.bench_function("hamiltonian 2+2 fermions, 8 sites", |b| {
        b.iter(|| hamiltonian::build(black_box(&ring), &species, &basis).unwrap())
    });
}

fn solve(c: &mut Criterion) {
    let (ring, species) = four_fermions();
    let (_, h) = operator(&ring, &species);
    let mut group = c.benchmark_group("ground state, dimension 784");
    group.sample_size(10);
    group.bench_function("dense", |b| {
        b.iter(|| eigen::ground_state(black_box(&h), &EigenConfig::default()).unwrap())
    });
    let krylov = EigenConfig { dense_threshold: 0, ..EigenConfig::default() };
    group.bench_function("lanczos", |b| b.iter(|| eigen::ground_state(black_box(&h), &krylov).unwrap()));
    group.finish();
}

fn scan(c: &mut Criterion) {
    let spec = SweepSpec::new(
        RingSpec::new(8, 1.0, 1.0, 0.0).unwrap(),
        SpeciesSpec::Fermions { n_up: 1, n_down: 1, u: 2.0 },
        Control::Omega { min: 0.0, max: 10.0, points: 21 },
    );
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("1+1 fermions, 21 rotations", |b| b.iter(|| sweep::run(black_box(&spec)).unwrap()));
    group.finish();
}

criterion_group!(benches, build, solve, scan);
criterion_main!(benches);
