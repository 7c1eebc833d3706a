//! Benchmarks for the hot paths: brute-force max-cut, hypercube sign
//! search, multistart ascent, and gadget evaluation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pnormcut::gadget::{gadget_matrix, gadget_value_f64};
use pnormcut::graph::{incidence_matrix, maxcut_bruteforce, Graph};
use pnormcut::norms::{p_norm_ascent, p_norm_sign_search, AscentConfig};
use pnormcut::reduction::build_z;
use pnormcut::scalar::PExponent;
use pnormcut::Rational;

fn bench_maxcut_bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("maxcut_bruteforce");
    for n in [10usize, 14, 18] {
        let g = Graph::complete(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| maxcut_bruteforce(g).unwrap().value)
        });
    }
    group.finish();
}

fn bench_sign_search(c: &mut Criterion) {
    let p: PExponent = "3".parse().unwrap();
    let mut group = c.benchmark_group("p_norm_sign_search");
    for n in [6usize, 10, 14] {
        let g = Graph::cycle(n).unwrap();
        let inst = build_z(&g, &p, Some(Rational::from(10))).unwrap();
        let z = inst.dense().unwrap().clone();
        group.bench_with_input(BenchmarkId::from_parameter(n), &z, |b, z| {
            b.iter(|| p_norm_sign_search(z, &p, 96).unwrap().value.to_f64())
        });
    }
    group.finish();
}

fn bench_ascent(c: &mut Criterion) {
    let p: PExponent = "3".parse().unwrap();
    let g = Graph::cycle(8).unwrap();
    let m = incidence_matrix(&g);
    let cfg = AscentConfig {
        restarts: 50,
        seed: 1,
        ..AscentConfig::default()
    };
    c.bench_function("p_norm_ascent_c8_50_restarts", |b| {
        b.iter(|| p_norm_ascent(&m, &p, &cfg).unwrap().value.to_f64())
    });
}

fn bench_gadget_value(c: &mut Criterion) {
    let _ = gadget_matrix(16).unwrap();
    let x: Vec<f64> = (0..16).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    c.bench_function("gadget_value_f64_n16", |b| {
        b.iter(|| gadget_value_f64(&x, 3.0))
    });
}

criterion_group!(
    benches,
    bench_maxcut_bruteforce,
    bench_sign_search,
    bench_ascent,
    bench_gadget_value
);
criterion_main!(benches);
