use std::sync::Arc;

use bgx_core::brown_gitler::brown_gitler;
use bgx_core::dyer_lashof::DlComplex;
use bgx_core::par::{sweep, sweep_sequential};
use bgx_core::verify::margolis_row;
use criterion::{criterion_group, criterion_main, Criterion};

fn margolis(c: &mut Criterion) {
    let cases: Vec<(u32, u32)> = (1..=6).flat_map(|n| (0..=3).map(move |k| (n, k))).collect();
    let work = |&(n, k): &(u32, u32)| margolis_row(n, k).unwrap().free;
    let mut g = c.benchmark_group("margolis_table");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| sweep_sequential(&cases, work)));
    g.bench_function("parallel", |b| b.iter(|| sweep(&cases, work)));
    g.finish();
}

fn dl_homology(c: &mut Criterion) {
    let cases: Vec<(u32, i32)> = (0..=4).flat_map(|n| (0..=10).map(move |d| (n, d))).collect();
    let work = |&(n, d): &(u32, i32)| {
        let cx = DlComplex::new(Arc::new(brown_gitler(n)), -1);
        cx.homology(1, d).map(|h| h.dim()).unwrap_or(0)
    };
    let mut g = c.benchmark_group("dl_homology");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| sweep_sequential(&cases, work)));
    g.bench_function("parallel", |b| b.iter(|| sweep(&cases, work)));
    g.finish();
}

criterion_group!(benches, margolis, dl_homology);
criterion_main!(benches);
