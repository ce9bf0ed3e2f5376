//! Seed-ensemble throughput: rayon worker pool vs. inline sequential
//! execution of the same Monte-Carlo workload, plus the dense eigensolve
//! that dominates probe cost.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use regnet::harness::{
    generate_regular_graph, run_monte_carlo_with, ExperimentConfig, InitialGraph, Parallelism,
    Scenario,
};
use regnet::protocol::ProtocolKind;
use regnet::rng::trial_rng;
use regnet::spectral::lambda2_of;

fn workload(protocol: ProtocolKind, seeds: usize) -> ExperimentConfig {
    ExperimentConfig {
        n: 60,
        k: 4,
        protocol,
        activation_prob: 0.9,
        beta: 0.01,
        initial: InitialGraph::AvgDegree(3.4),
        iteration_budget: 30_000,
        confirmation_window: None,
        probe_every_actions: 200,
        seeds: (0..seeds as u64).collect(),
        scenario: Scenario::Regularize,
    }
}

fn bench_parallel_vs_sequential(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_8_seeds");
    group.sample_size(10);
    for protocol in [ProtocolKind::Cfor, ProtocolKind::Ufa] {
        let cfg = workload(protocol, 8);
        group.bench_with_input(
            BenchmarkId::new("sequential", protocol.name()),
            &cfg,
            |b, cfg| b.iter(|| run_monte_carlo_with(black_box(cfg), 1, Parallelism::Sequential)),
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(
            BenchmarkId::new("rayon", protocol.name()),
            &cfg,
            |b, cfg| b.iter(|| run_monte_carlo_with(black_box(cfg), 1, Parallelism::Rayon)),
        );
    }
    group.finish();
}

fn bench_eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda2_probe");
    group.sample_size(10);
    for n in [100usize, 400] {
        let g = generate_regular_graph(n, 10, &mut trial_rng(0, 0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| lambda2_of(black_box(g)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_parallel_vs_sequential, bench_eigensolve);
criterion_main!(benches);
