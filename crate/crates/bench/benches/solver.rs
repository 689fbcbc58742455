use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracshoot::harness::{build_example, shoot_example, ExampleId, Pipeline};
use fracshoot::hpcm::Equation;
use fracshoot::{
    solve_system, FivpSystem, FractionalOrder, Method, Scheme, ShootingConfig, UniformGrid,
    WeightTable,
};

fn weight_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_table");
    let alpha = FractionalOrder::unit_interval(0.7).unwrap();
    for n in [256usize, 1024, 4096] {
        let grid = UniformGrid::new(0.0, 1.0, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, &grid| {
            b.iter(|| WeightTable::new(black_box(alpha), grid))
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    // y' cascade with a nonlinear closure, like the shooting base systems
    let order = |a| FractionalOrder::unit_interval(a).unwrap();
    let sys = FivpSystem::new(vec![
        Equation::new(order(0.4), 0.0, Arc::new(|_, x: &[f64]| x[1])),
        Equation::new(order(0.6), 0.0, Arc::new(|_, x: &[f64]| x[2])),
        Equation::new(
            order(0.7),
            0.2,
            Arc::new(|t, x: &[f64]| t.cos() + x[0] * x[0] + x[1]),
        ),
    ])
    .unwrap();
    let mut group = c.benchmark_group("solve_system");
    group.sample_size(20);
    for scheme in [Scheme::Linear, Scheme::Quadratic] {
        for n in [256usize, 1024] {
            let grid = UniformGrid::new(0.0, 1.0, n).unwrap();
            group.bench_with_input(BenchmarkId::new(scheme.to_string(), n), &grid, |b, grid| {
                b.iter(|| solve_system(black_box(&sys), grid, scheme).unwrap())
            });
        }
    }
    group.finish();
}

fn shoot(c: &mut Criterion) {
    let ex = build_example(ExampleId::Ex1, 0.4, 1.7).unwrap();
    let mut group = c.benchmark_group("shoot");
    group.sample_size(10);
    for (method, scheme) in [
        (Method::Newton, Scheme::Linear),
        (Method::Halley, Scheme::Quadratic),
    ] {
        let cfg = ShootingConfig::new(0.2, method, scheme);
        group.bench_function(BenchmarkId::new(format!("ex1_{method}"), 320), |b| {
            b.iter(|| shoot_example(&ex, Pipeline::Hpcm, 320, black_box(&cfg)).unwrap())
        });
    }
    let ex4 = build_example(ExampleId::Ex4, 1.0, 1.5).unwrap();
    let cfg = ShootingConfig::new(0.2, Method::Newton, Scheme::Linear).with_tol(1e-6);
    group.bench_function("ex4_linear_explicit/1024", |b| {
        b.iter(|| shoot_example(&ex4, Pipeline::LinearExplicit, 1024, black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, weight_tables, solve, shoot);
criterion_main!(benches);
