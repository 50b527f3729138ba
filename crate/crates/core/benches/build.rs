use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orient::builder::{build_arborescence, BuildConfig};
use orient::nnindex::BallTree;
use orient::synthetic::uniform_instance;

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    group.sample_size(10);
    for n in [1000, 4000] {
        let (e, powers) = uniform_instance(n, 32, 1).unwrap();
        for accelerated in [true, false] {
            let cfg = BuildConfig { accelerated, ..BuildConfig::default() };
            let name = if accelerated { "ball_tree" } else { "scan" };
            group.bench_with_input(BenchmarkId::new(name, n), &cfg, |b, cfg| {
                b.iter(|| build_arborescence(&e, &powers, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn knn(c: &mut Criterion) {
    let (e, powers) = uniform_instance(20_000, 32, 2).unwrap();
    let tree = BallTree::build(&e, &powers, Default::default(), 32).unwrap();
    c.bench_function("knn_20", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 7919) % e.len();
            tree.knn(e.row(i), 20, Some(i)).unwrap()
        })
    });
}

criterion_group!(benches, build, knn);
criterion_main!(benches);
