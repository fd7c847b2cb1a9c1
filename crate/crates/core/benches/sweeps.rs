use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use olab_core::family;
use olab_core::norms::{generalized_orlicz_morrey_norm, MorreySampling};
use olab_core::operators::{maximal_with, OperatorSpec, Path};
use olab_core::{GridSpec, GrowthFunction, YoungFunction};
use rayon::ThreadPoolBuilder;

// With the default `parallel` feature the core runs on the ambient rayon
// pool, so a one-thread pool gives the sequential baseline. Building with
// `--no-default-features` compiles the plain iterator fallback instead.
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let n = rayon::current_num_threads();
    let mut threads = vec![1];
    if n > 1 {
        threads.push(n);
    }
    threads
        .into_iter()
        .map(|t| (format!("threads-{t}"), ThreadPoolBuilder::new().num_threads(t).build().unwrap()))
        .collect()
}

fn bench_maximal(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximal");
    group.sample_size(10);
    let inputs = [
        ("1d", family::random(&GridSpec::default_1d(), 1, 1).unwrap().remove(0).f),
        ("2d", family::random(&GridSpec::default_2d(), 1, 1).unwrap().remove(0).f),
    ];
    for (dim, f) in &inputs {
        for (name, pool) in pools() {
            for centered in [true, false] {
                let spec = OperatorSpec::new(0.5, centered);
                let id = format!("{dim}-{}", if centered { "centered" } else { "uncentered" });
                group.bench_function(BenchmarkId::new(id, &name), |b| {
                    pool.install(|| b.iter(|| maximal_with(f, &spec, Path::Fast).unwrap()))
                });
            }
        }
    }
    group.finish();
}

fn bench_paths(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximal-path");
    group.sample_size(10);
    let f = family::random(&GridSpec::new(1, 1.0 / 32.0, 8.0).unwrap(), 2, 1).unwrap().remove(0).f;
    for (label, path) in [("fast", Path::Fast), ("brute", Path::Brute)] {
        for centered in [true, false] {
            let spec = OperatorSpec::new(0.5, centered);
            let id = if centered { "centered" } else { "uncentered" };
            group.bench_function(BenchmarkId::new(id, label), |b| {
                b.iter(|| maximal_with(&f, &spec, path).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_morrey(c: &mut Criterion) {
    let mut group = c.benchmark_group("morrey");
    group.sample_size(10);
    let f = family::random(&GridSpec::default_1d(), 3, 1).unwrap().remove(0).f;
    let sampling = MorreySampling::default_for(&f);
    let varphi = GrowthFunction::power(-0.25).unwrap();
    let young = [
        ("power", YoungFunction::power(2.0).unwrap()),
        ("power-log", YoungFunction::power_log(2.0, 1.0).unwrap()),
    ];
    for (kind, phi) in &young {
        for (name, pool) in pools() {
            for weak in [false, true] {
                let id = format!("{kind}-{}", if weak { "weak" } else { "strong" });
                group.bench_function(BenchmarkId::new(id, &name), |b| {
                    pool.install(|| b.iter(|| generalized_orlicz_morrey_norm(&f, phi, &varphi, weak, &sampling).unwrap()))
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, bench_maximal, bench_paths, bench_morrey);
criterion_main!(benches);
