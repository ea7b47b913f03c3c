use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use prodsat_core::bloch::{AngleBox, Interval};
use prodsat_core::geometry::{minkowski_sum, minkowski_sum_all, polyenc, AnnularSector};
use prodsat_core::{check_constraint, random_instance, solve, SolverConfig};

fn depth8_box(i: usize) -> AngleBox {
    let t = PI / 128.0;
    let p = 2.0 * PI / 256.0;
    let (a, b) = (i % 128, (i * 37) % 256);
    AngleBox {
        theta: Interval::new(a as f64 * t, (a + 1) as f64 * t),
        phi: Interval::new(b as f64 * p, (b + 1) as f64 * p),
    }
}

fn geometry(c: &mut Criterion) {
    let narrow = AnnularSector::new(0.3, 0.9, 0.4, 0.45).unwrap();
    let wide = AnnularSector::new(0.0, 1.0, 0.0, 2.0 * PI).unwrap();
    c.bench_function("polyenc narrow", |b| b.iter(|| polyenc(black_box(&narrow), 4)));
    c.bench_function("polyenc full turn", |b| b.iter(|| polyenc(black_box(&wide), 4)));

    let polys: Vec<_> = (0..8)
        .map(|i| {
            let s = AnnularSector::new(0.1, 0.5 + 0.05 * i as f64, 0.3 * i as f64, 0.3 * i as f64 + 0.2).unwrap();
            polyenc(&s, 4).unwrap()
        })
        .collect();
    c.bench_function("minkowski pair", |b| b.iter(|| minkowski_sum(black_box(&polys[0]), black_box(&polys[1]))));
    c.bench_function("minkowski sweep of 8", |b| b.iter(|| minkowski_sum_all(black_box(&polys))));
}

fn theory(c: &mut Criterion) {
    let inst = random_instance(3, 3, 1, 1).unwrap();
    let constraint = &inst.constraints[0];
    let full = [AngleBox::full(); 3];
    let fine = [depth8_box(3), depth8_box(50), depth8_box(101)];
    c.bench_function("theory check, full boxes", |b| {
        b.iter(|| check_constraint(black_box(constraint), black_box(&full), 4, 1e-9))
    });
    c.bench_function("theory check, depth-8 boxes", |b| {
        b.iter(|| check_constraint(black_box(constraint), black_box(&fine), 4, 1e-9))
    });
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let refuted = random_instance(2, 2, 3, 0).unwrap();
    let open = random_instance(3, 3, 2, 0).unwrap();
    let config = SolverConfig { check_progress: false, ..SolverConfig::default() };
    group.bench_function("n=2 k=2 m=3 (UN-PRODSAT)", |b| b.iter(|| solve(black_box(&refuted), &config).unwrap()));
    group.bench_function("n=3 k=3 m=2 (MAYBE)", |b| b.iter(|| solve(black_box(&open), &config).unwrap()));
    group.finish();
}

criterion_group!(benches, geometry, theory, end_to_end);
criterion_main!(benches);
