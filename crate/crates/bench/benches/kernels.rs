use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rkeig_bench::{Fixture, SIZES};
use rkeig_core::{build_chain, count_all_roots, locate_rank2_confirmed, solve_rank1, ShiftKind};

fn location(c: &mut Criterion) {
    let mut g = c.benchmark_group("location");
    for n in SIZES {
        let f = Fixture::new(n, 2, n as u64);
        g.bench_with_input(BenchmarkId::new("rank2_confirmed", n), &f, |b, f| {
            b.iter(|| locate_rank2_confirmed(black_box(&f.coeffs), ShiftKind::DoubleRight).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sturm_chain", n), &f, |b, f| {
            b.iter(|| build_chain(black_box(&f.coeffs)))
        });
        g.bench_with_input(BenchmarkId::new("sturm_census", n), &f, |b, f| {
            b.iter(|| count_all_roots(black_box(&f.coeffs)).unwrap())
        });
    }
    g.finish();
}

fn rank1_roots(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank1_bisection");
    for n in SIZES {
        let lambda: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let zeta = vec![1.0 / (n as f64).sqrt(); n];
        g.bench_with_input(
            BenchmarkId::from_parameter(n),
            &(lambda, zeta),
            |b, (l, z)| b.iter(|| solve_rank1(black_box(l), z, 1.0, 1e-10).unwrap()),
        );
    }
    g.finish();
}

criterion_group!(benches, location, rank1_roots);
criterion_main!(benches);
