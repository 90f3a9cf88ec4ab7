use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ricci_ot_core::corpus::{
    cycle_edges, heawood_edges, petersen_edges, random_instance, unit_graph, FamilyKind,
};
use ricci_ot_core::{total_curvature_with, Execution, WeightModel, WeightedGraph};
use std::hint::black_box;
use std::time::Duration;

fn inputs() -> Vec<(String, WeightedGraph, WeightModel)> {
    let mut out = Vec::new();
    for (name, g) in [
        ("C8", unit_graph(8, &cycle_edges(8))),
        ("petersen", unit_graph(10, &petersen_edges())),
        ("heawood", unit_graph(14, &heawood_edges())),
    ] {
        let wm = WeightModel::unit(&g);
        out.push((name.to_string(), g, wm));
    }
    let inst = random_instance(17, 9, FamilyKind::NonIncreasing);
    let wm = WeightModel::build(&inst.graph, inst.family.clone()).unwrap();
    out.push((format!("random-{}", inst.seed), inst.graph, wm));
    out
}

fn total_curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("total_curvature");
    group.sample_size(10);
    group.measurement_time(Duration::from_secs(5));
    for (name, g, wm) in inputs() {
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, &name), &(&g, &wm), |b, (g, wm)| {
                b.iter(|| total_curvature_with(black_box(g), black_box(wm), exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, total_curvature);
criterion_main!(benches);
