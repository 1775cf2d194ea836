use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinbus_bench::fixture;
use spinbus_core::benchgen::Family;
use spinbus_core::error_model::{DEFAULT_V_MAX, DEFAULT_V_MIN};
use spinbus_core::{build_interaction_graph, map, optimal_velocity, phase_error, spectral_placement, ErrorModelParams, Strategy};
use std::hint::black_box;

fn error_model(c: &mut Criterion) {
    let p = ErrorModelParams::default();
    c.bench_function("phase_error", |b| b.iter(|| phase_error(black_box(10.0), black_box(3e-6), &p)));
    let mut g = c.benchmark_group("optimal_velocity");
    for l_um in [1.0, 10.0, 30.0] {
        g.bench_with_input(BenchmarkId::from_parameter(l_um), &(l_um * 1e-6), |b, &l| {
            b.iter(|| optimal_velocity(black_box(l), &p, DEFAULT_V_MIN, DEFAULT_V_MAX))
        });
    }
    g.finish();
}

fn placement(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral_placement");
    for n in [16, 32, 64] {
        let f = fixture(Family::GraphState, n, 0);
        let graph = build_interaction_graph(&f.sliced);
        g.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, graph| b.iter(|| spectral_placement(graph)));
    }
    g.finish();
}

fn mapping(c: &mut Criterion) {
    let p = ErrorModelParams::default();
    let f = fixture(Family::Qft, 16, 0);
    let mut g = c.benchmark_group("map_qft16");
    for st in Strategy::ALL {
        g.bench_function(st.tag(), |b| b.iter(|| map(st, &f.sliced, &f.spec, &f.placement, &p)));
    }
    g.finish();
}

criterion_group!(benches, error_model, placement, mapping);
criterion_main!(benches);
