use std::hint::black_box;

use chsh_bench::{hermitian_batch, tsirelson_singlet};
use chsh_core::{analyze, bell_state, hermitian_eigen, optimize_settings, BellState};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigen");
    for n in [2, 4] {
        let batch = hermitian_batch(n, 64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &batch, |b, batch| {
            b.iter(|| {
                for m in batch {
                    black_box(hermitian_eigen(m).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn engine(c: &mut Criterion) {
    let sc = tsirelson_singlet();
    c.bench_function("analyze_tsirelson", |b| {
        b.iter(|| analyze(black_box(&sc)).unwrap())
    });

    let rho = bell_state(BellState::PsiMinus);
    let mut group = c.benchmark_group("optimize_settings");
    group.sample_size(10);
    group.bench_function("singlet_8_restarts", |b| {
        b.iter(|| optimize_settings(black_box(&rho), 8, 1e-10).unwrap())
    });
    group.finish();
}

criterion_group!(benches, eigen, engine);
criterion_main!(benches);
