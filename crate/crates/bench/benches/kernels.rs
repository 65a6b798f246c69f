use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dgbo_bench::smooth_field;
use dgbo_core::evolution::step_if_rk4;
use dgbo_core::ground_state::{petviashvili_solve, PetviashviliConfig};
use dgbo_core::spectral::{dealiased_power, fractional_derivative, hilbert_transform};
use dgbo_core::{Grid, ModelParams};

fn multipliers(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiplier");
    for n in [1 << 12, 1 << 15] {
        let f = smooth_field(n, 200.0);
        g.bench_with_input(BenchmarkId::new("fractional_derivative", n), &f, |b, f| {
            b.iter(|| fractional_derivative(black_box(f), 1.5).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("hilbert", n), &f, |b, f| {
            b.iter(|| hilbert_transform(black_box(f)))
        });
    }
    g.finish();
}

fn powers(c: &mut Criterion) {
    let mut g = c.benchmark_group("dealiased_power");
    let f = smooth_field(1 << 15, 200.0);
    for p in [2, 4, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            b.iter(|| dealiased_power(black_box(&f), p).unwrap())
        });
    }
    g.finish();
}

fn petviashvili(c: &mut Criterion) {
    let params = ModelParams::new(1.5, 4).unwrap();
    let grid = Grid::new(1 << 12, 200.0).unwrap();
    let cfg = PetviashviliConfig::default();
    let mut g = c.benchmark_group("petviashvili");
    g.sample_size(10);
    g.bench_function("beta1.5_k4_n4096", |b| {
        b.iter(|| petviashvili_solve(black_box(&params), &grid, &cfg).unwrap())
    });
    g.finish();
}

fn if_rk4(c: &mut Criterion) {
    let params = ModelParams::new(1.0, 5).unwrap();
    let u = smooth_field(1 << 15, 200.0).scaled(0.5);
    let mut g = c.benchmark_group("if_rk4_step");
    g.sample_size(20);
    g.bench_function("beta1_k5_n32768", |b| {
        b.iter(|| step_if_rk4(black_box(&u), 1e-4, &params).unwrap())
    });
    g.finish();
}

criterion_group!(benches, multipliers, powers, petviashvili, if_rk4);
criterion_main!(benches);
