//! Benchmarks for the three pipeline stages: truncated evolution,
//! the symbolic nullifier solver, and sector postselection.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use schwinger::builtin;
use schwinger::focksim::{casimir_postselect, evolve_vacuum};
use schwinger::nullifiers::{ad_kernel, exact_spin_nullifiers};

fn bench_evolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_vacuum");
    group.sample_size(10);
    for (name, cutoff) in [("two_epr", 12usize), ("chain3x2", 10), ("ring4x2", 8)] {
        let (g, _) = builtin(name).unwrap();
        group.bench_with_input(BenchmarkId::new(name, cutoff), &cutoff, |b, &cutoff| {
            b.iter(|| evolve_vacuum(&g, 0.1, cutoff).unwrap());
        });
    }
    group.finish();
}

fn bench_symbolic_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("nullifiers");
    group.sample_size(10);
    for name in ["chain3x2", "square4x2"] {
        let (g, pairing) = builtin(name).unwrap();
        group.bench_function(BenchmarkId::new("ad_kernel", name), |b| {
            b.iter(|| ad_kernel(&g));
        });
        group.bench_function(BenchmarkId::new("exact", name), |b| {
            b.iter(|| exact_spin_nullifiers(&g, &pairing));
        });
    }
    group.finish();
}

fn bench_postselection(c: &mut Criterion) {
    let mut group = c.benchmark_group("postselect");
    group.sample_size(10);
    let (g, pairing) = builtin("ring4x2").unwrap();
    let state = evolve_vacuum(&g, 0.1, 8).unwrap();
    let j2: Vec<u8> = vec![1, 1, 1, 1];
    group.bench_function("sector/ring4x2", |b| {
        b.iter(|| casimir_postselect(&state, &pairing, &j2).unwrap());
    });
    let sector = casimir_postselect(&state, &pairing, &j2).unwrap();
    group.bench_function("entangle/ring4x2", |b| {
        b.iter(|| schwinger::entangle::report("bench", &sector).unwrap());
    });
    group.finish();
}

criterion_group!(benches, bench_evolution, bench_symbolic_solver, bench_postselection);
criterion_main!(benches);
