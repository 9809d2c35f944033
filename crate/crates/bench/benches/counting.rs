use criterion::{criterion_group, criterion_main, Criterion};
use mdt_bench::{presentation, q};
use mdt_core::oracle::{count_points, CountOptions, Engine};
use std::hint::black_box;

fn engines(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_points");
    g.sample_size(10);
    let cases = [
        ("quantum/a2/p5", "q1_quantum.qp", vec![2u32], 5u64),
        ("conifold/a11/p5", "conifold.qp", vec![1, 1], 5),
        ("cyclic1/a11/p5", "cyclic_1.qp", vec![1, 1], 5),
    ];
    for (name, file, alpha, p) in cases {
        let (_, pres) = presentation(file);
        let params = q(2);
        for engine in [Engine::Exhaustive, Engine::LinearFiber] {
            let opts = CountOptions { engine, ..CountOptions::default() };
            let label = format!("{name}/{engine:?}");
            g.bench_function(label, |b| {
                b.iter(|| count_points(black_box(&pres), &alpha, p, &params, &opts).unwrap().count)
            });
        }
    }
    g.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
