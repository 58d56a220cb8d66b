use std::hint::black_box;

use cayauto_core::characteristics::{avg_length_exact, growth};
use cayauto_core::oracles::{oracle_g2, oracle_lamplighter_s1, walk_drift_grid};
use cayauto_core::presentations::preset;
use cayauto_core::ClassTTransducer;
use criterion::{criterion_group, criterion_main, Criterion};

fn tr(name: &str) -> ClassTTransducer {
    ClassTTransducer::from_presentation(preset(name).unwrap()).unwrap()
}

fn characteristics(c: &mut Criterion) {
    // Fresh transducers so the translation cache starts empty.
    c.bench_function("growth f2 N=8", |b| b.iter(|| growth(&tr("f2"), black_box(8)).unwrap()));
    c.bench_function("growth lamplighter N=10", |b| {
        b.iter(|| growth(&tr("lamplighter"), black_box(10)).unwrap())
    });
    c.bench_function("avglen z2 N=12", |b| {
        b.iter(|| {
            let t = tr("z2");
            avg_length_exact(&t, t.base_word(), black_box(12), None).unwrap()
        })
    });
    let s1 = oracle_lamplighter_s1();
    c.bench_function("drift S1 n=1000 x200", |b| {
        b.iter(|| walk_drift_grid(&s1, &[1000], 200, 1, 8).unwrap())
    });
    let g2 = oracle_g2();
    c.bench_function("drift G2 n=1000 x200", |b| {
        b.iter(|| walk_drift_grid(&g2, &[1000], 200, 1, 8).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = characteristics
}
criterion_main!(benches);
