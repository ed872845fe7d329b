//! Parallel vs sequential Monte Carlo estimation, plus the quadrature
//! kernels that dominate the analytic path.
//!
//! `estimate` uses the rayon pool (set `RAYON_NUM_THREADS` to pin the worker
//! count); `estimate_serial` is the single-threaded fallback that ships
//! behind the `parallel` feature gate. Both produce identical reports, so the
//! comparison isolates scheduling overhead and scaling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hetnet_core::{db_to_linear, estimate, estimate_serial, kappa, NetworkConfig, RngSeed, SimMode};

fn bench_estimate(c: &mut Criterion) {
    let cfg = NetworkConfig::reference();
    let gamma = db_to_linear(2.0);
    let seed = RngSeed(42);

    let mut group = c.benchmark_group("estimate_approximate");
    group.sample_size(10);
    for &n in &[512u64, 2048] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| estimate(&cfg, gamma, n, seed, SimMode::Approximate).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", n), &n, |b, &n| {
            b.iter(|| estimate_serial(&cfg, gamma, n, seed, SimMode::Approximate).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("estimate_accurate");
    group.sample_size(10);
    for &n in &[256u64] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| estimate(&cfg, gamma, n, seed, SimMode::Accurate).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", n), &n, |b, &n| {
            b.iter(|| estimate_serial(&cfg, gamma, n, seed, SimMode::Accurate).unwrap())
        });
    }
    group.finish();
}

fn bench_kappa(c: &mut Criterion) {
    c.bench_function("kappa_alpha4_2db", |b| {
        b.iter(|| kappa(4.0, db_to_linear(2.0)).unwrap())
    });
    c.bench_function("full_report", |b| {
        let cfg = NetworkConfig::reference();
        b.iter(|| hetnet_core::full_report(&cfg, db_to_linear(2.0)).unwrap())
    });
}

criterion_group!(benches, bench_estimate, bench_kappa);
criterion_main!(benches);
