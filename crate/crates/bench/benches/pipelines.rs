use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qsubspace::encoding::gram_block_encoding;
use qsubspace::linalg::{jacobi_svd, random_gaussian, random_orthonormal};
use qsubspace::pipeline::run;
use qsubspace::{DistanceKind, InputModel, InputSource, RunConfig};

fn svd(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobi_svd");
    for n in [8, 32, 64] {
        let a = random_gaussian(n, n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| jacobi_svd(a).unwrap()));
    }
    g.finish();
}

fn gram_encoding(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram_block_encoding");
    for n in [4, 8, 16] {
        let m = random_orthonormal(n, 2, 1).unwrap();
        let nn = random_orthonormal(n, 2, 2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(m, nn), |b, (m, nn)| {
            b.iter(|| gram_block_encoding(m, nn).unwrap())
        });
    }
    g.finish();
}

fn pipelines(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    let cases = [
        ("grassmann_blackbox", DistanceKind::Grassmann, InputModel::Blackbox),
        ("grassmann_memory", DistanceKind::Grassmann, InputModel::Memory),
        ("ellipsoid_blackbox", DistanceKind::Ellipsoid, InputModel::Blackbox),
    ];
    for (name, distance, model) in cases {
        let source = InputSource::Generated { n: 6, k: 2, kappa: 5.0, seed: 3 };
        let cfg = RunConfig { model, bits: 8, shots: 100_000, ..RunConfig::new(distance, source) };
        g.bench_function(name, |b| b.iter(|| run(&cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, svd, gram_encoding, pipelines);
criterion_main!(benches);
