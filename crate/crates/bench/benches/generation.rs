use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use recdag::graph_model::{build_dag_with, Storage};
use recdag::path_stats::first_parent_profile;
use recdag::{compute_profiles, Stat, StatSet};
use recdag_bench::spec;

fn generation(c: &mut Criterion) {
    let n = 100_000;
    let mut g = c.benchmark_group("generate");
    g.throughput(Throughput::Elements(n));
    for k in [1, 2, 8] {
        g.bench_with_input(BenchmarkId::new("compact", k), &k, |b, &k| {
            b.iter(|| build_dag_with(spec(n, k), Storage::Compact).unwrap())
        });
    }
    g.finish();
}

fn profiles(c: &mut Criterion) {
    let n = 100_000;
    let mut g = c.benchmark_group("profiles");
    g.throughput(Throughput::Elements(n));
    g.bench_function("streamed_S", |b| b.iter(|| compute_profiles(&spec(n, 2), StatSet::only(Stat::S)).unwrap()));
    g.bench_function("streamed_all", |b| b.iter(|| compute_profiles(&spec(n, 2), StatSet::ALL).unwrap()));
    let dag = build_dag_with(spec(n, 2), Storage::Compact).unwrap();
    g.bench_function("materialized_all", |b| b.iter(|| compute_profiles(&dag, StatSet::ALL).unwrap()));
    g.bench_function("first_parent_R", |b| b.iter(|| first_parent_profile(&spec(n, 2)).unwrap()));
    g.finish();
}

criterion_group!(benches, generation, profiles);
criterion_main!(benches);
