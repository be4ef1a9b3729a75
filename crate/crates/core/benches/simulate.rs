use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use streakcalc::oracle::{enumerate_counts_with, simulate_with, SimConfig};
use streakcalc::{Execution, RunSpec};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for k in [2u64, 4, 6] {
        let config = SimConfig::fair(RunSpec::new(k).unwrap(), 100_000, 7);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, k), &config, |b, cfg| {
                b.iter(|| simulate_with(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_counts");
    group.sample_size(10);
    let spec = RunSpec::new(4).unwrap();
    for n in [16u32, 20] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| enumerate_counts_with(spec, black_box(n), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_simulate, bench_enumerate);
criterion_main!(benches);
