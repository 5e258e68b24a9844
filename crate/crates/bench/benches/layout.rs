use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rocks::pipeline::{place, Algorithm, Options};
use rocks::regions_pure::layout_l1p;
use rocks::regions_stateful::layout_l1s;
use rocks_bench::{corpus, synthetic};

const LH: f64 = 16.0;

fn pure_vs_stateful(c: &mut Criterion) {
    let mut g = c.benchmark_group("l1-scaling");
    g.sample_size(10);
    for n in [1_000, 5_000, 20_000] {
        let t = synthetic(n, 7);
        g.bench_with_input(BenchmarkId::new("l1p", n), &t, |b, t| {
            b.iter(|| layout_l1p(black_box(t), LH))
        });
        g.bench_with_input(BenchmarkId::new("l1s", n), &t, |b, t| {
            b.iter(|| layout_l1s(black_box(t), LH).0)
        });
    }
    g.finish();
}

fn corpus_algorithms(c: &mut Criterion) {
    let opts = Options::default();
    for (name, t) in corpus(2.0) {
        let mut g = c.benchmark_group(format!("corpus/{name}"));
        for a in [
            Algorithm::Flat,
            Algorithm::L1p,
            Algorithm::L1s,
            Algorithm::L2a,
            Algorithm::Boxes,
            Algorithm::BoxesNs,
            Algorithm::SBlocks,
        ] {
            g.bench_function(a.name(), |b| {
                b.iter(|| place(black_box(&t), a, &opts).unwrap())
            });
        }
        g.finish();
    }
}

fn simplification(c: &mut Criterion) {
    let opts = Options {
        simplify: true,
        ..Options::default()
    };
    let (name, t) = corpus(2.0).swap_remove(0);
    c.bench_function(&format!("simplify/{name}"), |b| {
        b.iter(|| rocks::pipeline::run(black_box(&t), Algorithm::L1s, &opts).unwrap())
    });
}

criterion_group!(benches, pure_vs_stateful, corpus_algorithms, simplification);
criterion_main!(benches);
