use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use localcut::generators;
use localcut::spectral::{fiedler, l1_pagerank};
use localcut::{flow_improve, local_flow_improve, mqi, sweep_cut, SeedVector, SweepObjective};
use localcut_bench::{clique_ring_fixture, random_fixture};

fn l1pr_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("l1pr_clique_ring");
    for count in [100, 1_000, 10_000] {
        let (g, seed) = clique_ring_fixture(count, 10);
        let h = SeedVector::single(seed);
        group.bench_with_input(BenchmarkId::from_parameter(count * 10), &g, |b, g| {
            b.iter(|| l1_pagerank(g, &h, 0.15, 1e-4, 1e-10).unwrap())
        });
    }
    group.finish();
}

fn local_flow_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("local_flow_improve_clique_ring");
    group.sample_size(20);
    for count in [100, 1_000, 10_000] {
        let (g, _) = clique_ring_fixture(count, 10);
        let r = generators::ring_clique(0, 10).union(&generators::ring_clique(1, 10));
        group.bench_with_input(BenchmarkId::from_parameter(count * 10), &g, |b, g| {
            b.iter(|| local_flow_improve(g, &r, 1.0).unwrap())
        });
    }
    group.finish();
}

fn flow_methods(c: &mut Criterion) {
    let (g, r) = random_fixture(200, 0.03, 7);
    c.bench_function("mqi_random_200", |b| b.iter(|| mqi(&g, &r).unwrap()));
    c.bench_function("flow_improve_random_200", |b| b.iter(|| flow_improve(&g, &r).unwrap()));
}

fn spectral_methods(c: &mut Criterion) {
    let (g, _) = random_fixture(500, 0.01, 3);
    c.bench_function("fiedler_random_500", |b| b.iter(|| fiedler(&g, true, 1e-8).unwrap()));
    let (_, x) = fiedler(&g, true, 1e-8).unwrap();
    c.bench_function("sweep_random_500", |b| {
        b.iter(|| sweep_cut(&g, &x, SweepObjective::Conductance, false).unwrap())
    });
}

criterion_group!(benches, l1pr_scaling, local_flow_scaling, flow_methods, spectral_methods);
criterion_main!(benches);
