use criterion::{criterion_group, criterion_main, Criterion};
use mdt_core::{theorem_series, Branch, Family, TheoremSpec};
use std::hint::black_box;

fn expand(c: &mut Criterion) {
    let cases = [
        ("quantum/generic/n8", Family::QuantumC3, Branch::Generic, 8),
        ("quantum/root2/n8", Family::QuantumC3, Branch::RootOfUnity(2), 8),
        ("conifold/generic/n4", Family::Conifold, Branch::Generic, 4),
        ("cyclic2/generic/n3", Family::Cyclic(2), Branch::Generic, 3),
    ];
    let mut g = c.benchmark_group("theorem_series");
    for (name, family, branch, n) in cases {
        let spec = TheoremSpec::new(family, branch).unwrap();
        g.bench_function(name, |b| b.iter(|| theorem_series(black_box(&spec), n).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, expand);
criterion_main!(benches);
