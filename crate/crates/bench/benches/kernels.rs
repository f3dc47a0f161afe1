use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use carleman_core::analysis::{lp_norm, Polynomial};
use carleman_core::domains::quadrature::{ball_rule, sphere_rule};
use carleman_core::kernels::{heat_kernel_box, heat_truncation};
use carleman_core::verify::verify_green_bounds;
use carleman_core::{BallKernels, Domain, TestFunction};

fn ball_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball_kernels");
    for dim in [3usize, 4, 6] {
        let k = BallKernels::unit(dim).unwrap();
        let x: Vec<f64> = (0..dim).map(|i| 0.1 * (i as f64 + 1.0) / dim as f64).collect();
        let y: Vec<f64> = (0..dim).map(|i| -0.2 + 0.05 * i as f64).collect();
        let zeta = {
            let mut z = vec![0.0; dim];
            z[0] = 1.0;
            z
        };
        group.bench_with_input(BenchmarkId::new("green", dim), &dim, |b, _| b.iter(|| k.green(black_box(&x), black_box(&y))));
        group.bench_with_input(BenchmarkId::new("poisson", dim), &dim, |b, _| {
            b.iter(|| k.poisson(black_box(&x), black_box(&zeta)))
        });
    }
    group.finish();
}

fn heat(c: &mut Criterion) {
    let mut group = c.benchmark_group("heat_kernel_box");
    let edges = [1.0; 4];
    let (x, y) = ([0.3, 0.5, 0.2, 0.7], [0.6, 0.4, 0.8, 0.1]);
    for t in [0.01, 0.1, 1.0] {
        let k = heat_truncation(&edges, t);
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| heat_kernel_box(&edges, black_box(t), &x, &y, k))
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    for m in [8usize, 16] {
        group.bench_with_input(BenchmarkId::new("sphere_4", m), &m, |b, &m| b.iter(|| sphere_rule(4, black_box(m))));
        group.bench_with_input(BenchmarkId::new("ball_4", m), &m, |b, &m| b.iter(|| ball_rule(4, black_box(m))));
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_norm");
    let f = TestFunction::polynomial(Polynomial::parse(4, "x1^2 - 3*x2^4 + x3").unwrap());
    for level in [2u32, 3, 4] {
        let rule = Domain::unit_ball(4).interior_quadrature(level).unwrap();
        group.bench_with_input(BenchmarkId::new("ball_4", rule.len()), &rule, |b, rule| {
            b.iter(|| lp_norm(&f, rule, black_box(8.0 / 3.0)))
        });
    }
    group.finish();
}

fn green_bounds(c: &mut Criterion) {
    c.bench_function("green_bounds_dim4_1000_pairs", |b| b.iter(|| verify_green_bounds(4, None, 1000, black_box(7))));
}

criterion_group!(benches, ball_kernels, heat, quadrature, norms, green_bounds);
criterion_main!(benches);
