use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rkeig_bench::{Fixture, SIZES};
use rkeig_core::{
    jacobi_evd, perturbation_update, update_decomposition, update_eigenvalues, updated_pairs,
    JacobiConfig, UpdateOptions,
};

fn eigenvalues(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues");
    for n in SIZES {
        let f = Fixture::new(n, 2, n as u64);
        let tol = rkeig_core::default_tol(1.0);
        g.bench_with_input(BenchmarkId::new("rank2", n), &f, |b, f| {
            b.iter(|| update_eigenvalues(black_box(&f.d), &f.u, tol).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("rank1_twice", n), &f, |b, f| {
            let opts = UpdateOptions::default();
            b.iter(|| {
                let mid = updated_pairs(black_box(&f.d), &f.u.column(0), &opts)
                    .unwrap()
                    .0;
                update_eigenvalues(&mid, &f.u.column(1), tol).unwrap()
            })
        });
        let f3 = Fixture::new(n, 3, n as u64);
        g.bench_with_input(BenchmarkId::new("rank3", n), &f3, |b, f| {
            b.iter(|| update_eigenvalues(black_box(&f.d), &f.u, tol).unwrap())
        });
    }
    g.finish();
}

fn decompositions(c: &mut Criterion) {
    let mut g = c.benchmark_group("decomposition");
    g.sample_size(10);
    let tol = rkeig_core::default_tol(1.0);
    for n in SIZES {
        let f = Fixture::new(n, 2, n as u64);
        g.bench_with_input(BenchmarkId::new("rank2", n), &f, |b, f| {
            b.iter(|| update_decomposition(black_box(&f.d), &f.u, tol).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("perturbation", n), &f, |b, f| {
            b.iter(|| perturbation_update(black_box(&f.d), &f.u).unwrap())
        });
        if n <= 200 {
            g.bench_with_input(BenchmarkId::new("direct_evd", n), &f, |b, f| {
                b.iter(|| jacobi_evd(black_box(&f.target), JacobiConfig::default()).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, eigenvalues, decompositions);
criterion_main!(benches);
