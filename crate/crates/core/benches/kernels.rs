//! Parallel against sequential node loops on the three hot kernels.
//!
//! `cargo bench -p idcm --bench kernels`

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use idcm::body::random::random_hexagon;
use idcm::lp::lp_intersection_body;
use idcm::measure::{ip_measure, MeasureOptions};
use idcm::par::set_sequential;
use idcm::transform::p_cosine_transform;
use idcm::{Body, EvenSphericalFunction, LpParams, SphericalGrid, SymmetricPolytope};
use std::hint::black_box;

const MODES: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("p_cosine_transform_s2");
    group.sample_size(10);
    let g = SphericalGrid::shared(3, 32).unwrap();
    let f = EvenSphericalFunction::from_fn(g, |u| 1.0 + u.x * u.x);
    for (name, seq) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_sequential(seq);
            b.iter(|| p_cosine_transform(black_box(&f), 0.5).unwrap())
        });
    }
    set_sequential(false);
    group.finish();
}

fn intersection_body(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_intersection_body_cube");
    group.sample_size(10);
    let g = SphericalGrid::shared(3, 32).unwrap();
    let cube = Body::Polytope(SymmetricPolytope::cube(3).unwrap());
    let params = LpParams::new(3, 0.5).unwrap();
    for (name, seq) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_sequential(seq);
            b.iter(|| lp_intersection_body(black_box(&cube), params, &g).unwrap())
        });
    }
    set_sequential(false);
    group.finish();
}

fn measure(c: &mut Criterion) {
    let mut group = c.benchmark_group("ip_measure_hexagon");
    group.sample_size(10);
    let hex = random_hexagon(1);
    let o = MeasureOptions::new(SphericalGrid::shared(2, 720).unwrap());
    let params = LpParams::new(2, 0.5).unwrap();
    for (name, seq) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            set_sequential(seq);
            b.iter(|| ip_measure(black_box(&hex), params, &o).unwrap())
        });
    }
    set_sequential(false);
    group.finish();
}

criterion_group!(benches, transform, intersection_body, measure);
criterion_main!(benches);
