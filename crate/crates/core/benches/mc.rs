use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slit_core::hyperbolic::{estimate_functional_limit, HorizonPolicy};
use slit_core::mc::{estimate_survival, sample_hit_places_exact, simulate_hits, Execution, MCConfig};
use slit_core::Point;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn euler_exits(c: &mut Criterion) {
    let mut group = c.benchmark_group("euler_exits");
    group.sample_size(10);
    let cfg = MCConfig::default().with_paths(2_000).with_horizon(1e6);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, cfg.paths), &exec, |b, exec| {
            b.iter(|| simulate_hits(black_box(&cfg), Point::new(1.0, 0.0), *exec).unwrap())
        });
    }
    group.finish();
}

fn survival(c: &mut Criterion) {
    let mut group = c.benchmark_group("survival_t1");
    group.sample_size(10);
    let cfg = MCConfig::default().with_paths(2_000);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, cfg.paths), &exec, |b, exec| {
            b.iter(|| estimate_survival(black_box(&cfg), Point::new(1.0, 0.0), 1.0, *exec).unwrap())
        });
    }
    group.finish();
}

fn exact_sampler(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_exits");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 100_000), &exec, |b, exec| {
            b.iter(|| sample_hit_places_exact(Point::new(0.0, 1.0), black_box(100_000), 1, *exec).unwrap())
        });
    }
    group.finish();
}

fn functional(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_functional");
    group.sample_size(10);
    let policy = HorizonPolicy::default();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 2_000), &exec, |b, exec| {
            b.iter(|| estimate_functional_limit(2.0, 1.0, &policy, black_box(2_000), 1, *exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, euler_exits, survival, exact_sampler, functional);
criterion_main!(benches);
