use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use orlicz_core::conjugation::{ominus_bruteforce_with, ominus_monotone_with, ominus_with};
use orlicz_core::measure::luxemburg_norm;
use orlicz_core::{gen, Exec, GridSpec, YoungFunction};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn pointwise(c: &mut Criterion) {
    let phi = YoungFunction::power(2.0).unwrap();
    let phi1 = YoungFunction::power(3.0).unwrap();
    let grid = GridSpec::default();
    let mut g = c.benchmark_group("pointwise_4097");
    for (name, exec) in EXECS {
        g.bench_function(name, |b| b.iter(|| ominus_with(black_box(&phi), black_box(&phi1), &grid, exec).unwrap()));
    }
    g.finish();
}

fn sampled(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampled");
    g.sample_size(10);
    for n in [1024usize, 4096] {
        let mut r = gen::rng(n as u64);
        let phi = gen::random_convex_sampled(&mut r, n);
        let phi1 = gen::random_convex_sampled(&mut r, n);
        for (name, exec) in EXECS {
            g.bench_with_input(BenchmarkId::new(format!("monotone_{name}"), n), &n, |b, _| {
                b.iter(|| ominus_monotone_with(&phi, &phi1, exec).unwrap())
            });
            g.bench_with_input(BenchmarkId::new(format!("bruteforce_{name}"), n), &n, |b, _| {
                b.iter(|| ominus_bruteforce_with(&phi, &phi1, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn norm(c: &mut Criterion) {
    let mut r = gen::rng(5);
    let sp = gen::random_space(&mut r, 1 << 16, 1.0);
    let x = gen::random_simple(&mut r, &sp, 8, (1e-2, 1e2), 0.2);
    let phi = YoungFunction::exp_minus_one(1.0).unwrap();
    c.bench_function("luxemburg_norm_65536_cells", |b| b.iter(|| luxemburg_norm(black_box(&phi), &x, &sp)));
}

criterion_group!(benches, pointwise, sampled, norm);
criterion_main!(benches);
