//! One thread against the whole pool on the per-`n` sweeps. Built without the
//! `parallel` feature both rows run the same sequential code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fibthue::par;
use fibthue::pipeline::{run_all, Config};
use fibthue::reduction::{convergent_sweep, phase2, ReduceConfig};
use fibthue::sequences::ThueInstance;
use fibthue::solver::brute_force;

fn modes() -> [(&'static str, usize); 2] {
    [("sequential", 1), ("parallel", 0)]
}

fn sweeps(c: &mut Criterion) {
    let cfg = ReduceConfig::default();
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    for (name, jobs) in modes() {
        g.bench_function(BenchmarkId::new("phase2_49_64", name), |b| {
            b.iter(|| par::with_jobs(jobs, || phase2(49, 64, &cfg).unwrap()))
        });
        g.bench_function(BenchmarkId::new("convergents_49_132", name), |b| {
            b.iter(|| par::with_jobs(jobs, || convergent_sweep(49, 132).unwrap()))
        });
        g.bench_function(BenchmarkId::new("brute_force_n5", name), |b| {
            let inst = ThueInstance::new(5);
            b.iter(|| par::with_jobs(jobs, || brute_force(&inst, 1000)))
        });
        g.bench_function(BenchmarkId::new("solve_1_16", name), |b| {
            let config = Config { max_n: Some(16), ..Config::default() };
            b.iter(|| par::with_jobs(jobs, || run_all(&config).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
