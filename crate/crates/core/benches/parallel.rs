use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modelcomp::engine::{builtin, ec_models, kaiser_hull_pi2};
use modelcomp::hf::{dual_path_check, quotient_check};
use modelcomp::par::with_jobs;
use modelcomp::templates::TemplateBounds;

fn jobs_settings() -> [(&'static str, usize); 2] {
    [("sequential", 1), ("pool", 0)]
}

fn quotient(c: &mut Criterion) {
    let mut g = c.benchmark_group("quotient_check_m4");
    for (name, jobs) in jobs_settings() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &j| {
            b.iter(|| with_jobs(j, || quotient_check(4, 3).unwrap()))
        });
    }
    g.finish();
}

fn dual_path(c: &mut Criterion) {
    let mut g = c.benchmark_group("dual_path_m4");
    for (name, jobs) in jobs_settings() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &jobs, |b, &j| {
            b.iter(|| with_jobs(j, || dual_path_check(4).unwrap()))
        });
    }
    g.finish();
}

fn engine(c: &mut Criterion) {
    let graphs = builtin::graphs(5).unwrap();
    let mut g = c.benchmark_group("graphs5");
    g.sample_size(10);
    for (name, jobs) in jobs_settings() {
        g.bench_with_input(BenchmarkId::new("ec_models", name), &jobs, |b, &j| {
            b.iter(|| with_jobs(j, || ec_models(&graphs, 1).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("kaiser_hull", name), &jobs, |b, &j| {
            b.iter(|| {
                with_jobs(j, || {
                    kaiser_hull_pi2(&graphs, 1, 2, TemplateBounds::default()).unwrap()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, quotient, dual_path, engine);
criterion_main!(benches);
